//! Canonical space models used throughout the verification suites.

use super::chi::{plane_case_bundle, PLANE_TY_CLASS};
use super::SpaceModel;

pub fn projective(n: u32) -> SpaceModel {
    SpaceModel::ProjectiveSpace(n)
}

/// The projectivized rank-4 bundle over P^2 containing the plane-case blowup.
pub fn plane_case_ambient() -> SpaceModel {
    SpaceModel::ProjBundle {
        base: Box::new(projective(2)),
        bundle: plane_case_bundle(),
    }
}

/// The plane-case blowup as a divisor of class 2H' + h' in the ambient bundle.
pub fn plane_case_blowup() -> SpaceModel {
    SpaceModel::DivisorIn {
        ambient: Box::new(plane_case_ambient()),
        class: PLANE_TY_CLASS.to_vec(),
    }
}

/// A cubic fourfold in P^5.
pub fn cubic_fourfold() -> SpaceModel {
    SpaceModel::DivisorIn { ambient: Box::new(projective(5)), class: vec![3] }
}

/// A three-dimensional quadric in P^4.
pub fn quadric_threefold() -> SpaceModel {
    SpaceModel::DivisorIn { ambient: Box::new(projective(4)), class: vec![2] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(plane_case_ambient().dim(), 5);
        assert_eq!(plane_case_blowup().dim(), 4);
        assert_eq!(cubic_fourfold().dim(), 4);
        assert_eq!(quadric_threefold().dim(), 3);
    }

    #[test]
    fn pic_ranks() {
        assert_eq!(plane_case_blowup().pic_rank(), 2);
        assert_eq!(cubic_fourfold().pic_rank(), 1);
    }
}
