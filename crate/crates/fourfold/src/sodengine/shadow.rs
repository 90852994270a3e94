//! Numerical shadows: Euler characteristics of concrete objects twisted
//! through a hyperplane range, and the additivity check every collapsed
//! triangle must pass.

use serde::{Deserialize, Serialize};

use super::engine::TriangleRecord;
use super::{class_add, class_scale, class_sub, Geometry, ObjectExpr, SodError};

/// chi(obj ⊗ O(tH)) for t over an inclusive range. Pushforwards expand
/// through the ambient restriction sequence; shifts contribute signs.
pub fn hilbert_shadow(
    g: &Geometry,
    obj: &ObjectExpr,
    range: (i64, i64),
) -> Result<Vec<i64>, SodError> {
    (range.0..=range.1).map(|t| chi_twisted(g, obj, t)).collect()
}

fn chi_twisted(g: &Geometry, obj: &ObjectExpr, t: i64) -> Result<i64, SodError> {
    let th = class_scale(&g.hyperplane, t);
    chi_of(g, obj, &th)
}

fn chi_of(g: &Geometry, obj: &ObjectExpr, extra: &[i64]) -> Result<i64, SodError> {
    match obj {
        ObjectExpr::Line(c) => Ok(g.chi_line(&class_add(c, extra))),
        ObjectExpr::Pushforward { sub, twist, .. } => {
            let s = g.subvariety(sub)?;
            let total = class_add(twist, extra);
            Ok(g.chi_line(&total) - g.chi_line(&class_sub(&total, &s.witness)))
        }
        ObjectExpr::Shift(inner, n) => {
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            Ok(sign * chi_of(g, inner, extra)?)
        }
        ObjectExpr::Opaque(label) => Err(SodError::ShadowUndefined(format!(
            "opaque object `{label}` has no numerical shadow"
        ))),
    }
}

/// Result of checking chi(mid) = chi(sub) + chi(quot) over a twist range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowCheck {
    pub sub: String,
    pub mid: String,
    pub quot: String,
    pub range: (i64, i64),
    pub sub_chi: Vec<i64>,
    pub mid_chi: Vec<i64>,
    pub quot_chi: Vec<i64>,
    pub additive: bool,
}

pub fn check_triangle_shadows(
    g: &Geometry,
    triangles: &[TriangleRecord],
    range: (i64, i64),
) -> Result<Vec<ShadowCheck>, SodError> {
    triangles
        .iter()
        .map(|tri| {
            let sub_chi = hilbert_shadow(g, &tri.sub, range)?;
            let mid_chi = hilbert_shadow(g, &tri.mid, range)?;
            let quot_chi = hilbert_shadow(g, &tri.quot, range)?;
            let additive = mid_chi
                .iter()
                .zip(sub_chi.iter().zip(&quot_chi))
                .all(|(m, (s, q))| *m == *s + *q);
            Ok(ShadowCheck {
                sub: g.render_object(&tri.sub),
                mid: g.render_object(&tri.mid),
                quot: g.render_object(&tri.quot),
                range,
                sub_chi,
                mid_chi,
                quot_chi,
                additive,
            })
        })
        .collect()
}
