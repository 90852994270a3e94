//! The two shipped replay cases.
//!
//! Plane case: the blowup of a cubic fourfold along a contained plane is a
//! quadric-surface fibration over P^2; seven moves turn its fibration
//! decomposition into the blowup decomposition, identifying the Clifford
//! component with the interesting piece of the cubic.
//!
//! Nodal case: the blowup of a one-node cubic at the node is also the blowup
//! of P^4 along a (2,3)-intersection K3 surface; six moves turn the P^4
//! blowup decomposition into the categorical-resolution decomposition.

use super::facts::{AbstractMutationRule, AssertedOrthogonality, FactBase};
use super::replay::{Script, Step, StepOp};
use super::{
    BlockSel, ComponentTerm, FunctorAtom, FunctorExpr, Geometry, MutDir, ObjectExpr, Sod,
};

pub const PLANE_CASE_NAME: &str = "plane";
pub const SINGULAR_CASE_NAME: &str = "singular";

/// Component labels for the abstract pieces.
pub const CLIFFORD_BASE: &str = "D^b(P^2, Cl0)";
pub const INTERESTING_BASE: &str = "A_Y";
pub const K3_BASE: &str = "D^b(S)";
pub const RESOLUTION_BASE: &str = "~A_Y";

fn push(map: &str, sub: &str, twist: &[i64]) -> ObjectExpr {
    ObjectExpr::Pushforward { map: map.into(), sub: sub.into(), twist: twist.to_vec() }
}

/// Asserted facts for the plane case: pushforwards off the exceptional
/// divisor are orthogonal to pullback line bundles, because the exceptional
/// P^1-fibers see the conormal twist as O(-1), which has no cohomology.
pub fn plane_case_facts() -> FactBase {
    let justification = "pushforward off the exceptional divisor vs pullback line bundle: \
        relative duality reduces to fiberwise cohomology of O(-1) on the exceptional \
        P^1-fibration, which vanishes"
        .to_string();
    let pairs: [(ObjectExpr, ObjectExpr); 3] = [
        (push("i", "D", &[0, 0]), ObjectExpr::line(&[1, 0])),
        (push("i", "D", &[0, 0]), ObjectExpr::line(&[2, 0])),
        (push("i", "D", &[1, 0]), ObjectExpr::line(&[2, 0])),
    ];
    FactBase {
        asserted: pairs
            .into_iter()
            .map(|(from, to)| AssertedOrthogonality {
                from,
                to,
                justification: justification.clone(),
            })
            .collect(),
        rules: vec![],
    }
}

/// Facts for the nodal case: the only non-oracle ingredient is the action of
/// the left mutation through the blowup-kernel component on pullback line
/// bundles, which tensors them by O(D).
pub fn singular_case_facts() -> FactBase {
    FactBase {
        asserted: vec![],
        rules: vec![AbstractMutationRule {
            base: K3_BASE.into(),
            dir: MutDir::Left,
            // applies to pullbacks from P^4: h-coordinate free, D-coordinate zero
            applies_mask: vec![true, false],
            add: vec![0, 1],
            justification: "left mutation of a pullback through the blowup-kernel component \
                is the twist by the exceptional divisor: the defining sequence of O(D) \
                realizes the mutation triangle"
                .to_string(),
        }],
    }
}

/// Start of the plane case: Clifford component followed by the six line
/// bundles of the fibration decomposition.
pub fn plane_start() -> Sod {
    Sod::new(
        crate::piclattice::PLANE_CASE,
        vec![
            ComponentTerm::abstract_named(CLIFFORD_BASE, "Phi"),
            ComponentTerm::line(&[0, -1]),
            ComponentTerm::line(&[0, 0]),
            ComponentTerm::line(&[0, 1]),
            ComponentTerm::line(&[1, 0]),
            ComponentTerm::line(&[1, 1]),
            ComponentTerm::line(&[1, 2]),
        ],
    )
}

/// Target of the plane case: the blowup decomposition, with the interesting
/// component of the cubic in the abstract slot.
pub fn plane_target() -> Sod {
    Sod::new(
        crate::piclattice::PLANE_CASE,
        vec![
            ComponentTerm::abstract_named(INTERESTING_BASE, "sigma^*"),
            ComponentTerm::line(&[0, 0]),
            ComponentTerm::line(&[1, 0]),
            ComponentTerm::line(&[2, 0]),
            ComponentTerm::Exceptional(push("i", "D", &[0, 0])),
            ComponentTerm::Exceptional(push("i", "D", &[1, 0])),
            ComponentTerm::Exceptional(push("i", "D", &[2, 0])),
        ],
    )
}

pub fn plane_script() -> Script {
    Script {
        case: Some(PLANE_CASE_NAME.into()),
        start: plane_start(),
        target: plane_target(),
        steps: vec![
            // 1: the Clifford component moves right past O(-h)
            Step::plain(StepOp::MutateRight { k: 1 }),
            // 2: O(-h) rotates to the far end, arriving as O(2H)
            Step::plain(StepOp::SerreRotate { block: BlockSel::Prefix, len: 1 }),
            // 3: transpose the completely orthogonal pair (O(2h+H), O(2H))
            Step::plain(StepOp::Transpose { i: 6 }),
            // 4: O(2h+H) rotates to the front, arriving as O(h-H)
            Step::plain(StepOp::SerreRotate { block: BlockSel::Suffix, len: 1 }),
            // 5: the Clifford component moves left past O(h-H)
            Step::plain(StepOp::MutateLeft { k: 1 }),
            // 6: three simultaneous right mutations, each collapsing to a
            //    pushforward off the exceptional divisor
            Step::grouped(StepOp::MutateRight { k: 2 }, "triple-right"),
            Step::grouped(StepOp::Collapse { k: 3 }, "triple-right"),
            Step::grouped(StepOp::MutateRight { k: 4 }, "triple-right"),
            Step::grouped(StepOp::Collapse { k: 5 }, "triple-right"),
            Step::grouped(StepOp::MutateRight { k: 6 }, "triple-right"),
            Step::grouped(StepOp::Collapse { k: 7 }, "triple-right"),
            // 7: three simultaneous transpositions sort the pushforwards to
            //    the end
            Step::grouped(StepOp::Transpose { i: 5 }, "triple-swap"),
            Step::grouped(StepOp::Transpose { i: 3 }, "triple-swap"),
            Step::grouped(StepOp::Transpose { i: 4 }, "triple-swap"),
        ],
    }
}

/// Expected normal form of the functor decorating the abstract component
/// after the plane replay.
pub fn plane_expected_functor() -> FunctorExpr {
    FunctorExpr(vec![
        FunctorAtom::LeftMut(ObjectExpr::line(&[-1, 1])),
        FunctorAtom::RightMut(ObjectExpr::line(&[0, -1])),
        FunctorAtom::Named("Phi".into()),
    ])
}

/// Start of the nodal case: blowup-kernel component and the pullback
/// exceptional collection from P^4.
pub fn singular_start() -> Sod {
    Sod::new(
        crate::piclattice::SINGULAR_CASE,
        vec![
            ComponentTerm::abstract_named(K3_BASE, "Phi"),
            ComponentTerm::line(&[-3, 0]),
            ComponentTerm::line(&[-2, 0]),
            ComponentTerm::line(&[-1, 0]),
            ComponentTerm::line(&[0, 0]),
            ComponentTerm::line(&[1, 0]),
        ],
    )
}

/// Target of the nodal case: the categorical-resolution decomposition with
/// two pushforwards off the contracted quadric in front.
pub fn singular_target() -> Sod {
    Sod::new(
        crate::piclattice::SINGULAR_CASE,
        vec![
            ComponentTerm::Exceptional(push("alpha", "Q", &[-2, 0])),
            ComponentTerm::Exceptional(push("alpha", "Q", &[-1, 0])),
            ComponentTerm::abstract_named(RESOLUTION_BASE, "incl"),
            ComponentTerm::line(&[0, 0]),
            ComponentTerm::line(&[3, -1]),
            ComponentTerm::line(&[6, -2]),
        ],
    )
}

pub fn singular_script() -> Script {
    Script {
        case: Some(SINGULAR_CASE_NAME.into()),
        start: singular_start(),
        target: singular_target(),
        steps: vec![
            // 1: the three most negative pullbacks move left through the
            //    kernel component, each picking up O(D)
            Step::plain(StepOp::MutateLeft { k: 1 }),
            Step::plain(StepOp::MutateLeft { k: 2 }),
            Step::plain(StepOp::MutateLeft { k: 3 }),
            // 2: the kernel component moves right past O and O(h)
            Step::plain(StepOp::MutateRight { k: 4 }),
            Step::plain(StepOp::MutateRight { k: 5 }),
            // 3: transpose the orthogonal pair (O(-h+D), O)
            Step::plain(StepOp::Transpose { i: 3 }),
            // 4: two simultaneous right mutations collapsing onto the
            //    contracted quadric
            Step::grouped(StepOp::MutateRight { k: 2 }, "double-right"),
            Step::grouped(StepOp::Collapse { k: 3 }, "double-right"),
            Step::grouped(StepOp::MutateRight { k: 4 }, "double-right"),
            Step::grouped(StepOp::Collapse { k: 5 }, "double-right"),
            // 5: left mutation of O(h) through the quadric pushforward,
            //    collapsing to O(3h-D)
            Step::plain(StepOp::MutateLeft { k: 3 }),
            Step::plain(StepOp::Collapse { k: 3 }),
            // 6: the last three components rotate to the front through the
            //    canonical class, then everything twists by the hyperplane
            Step::plain(StepOp::SerreRotate { block: BlockSel::Suffix, len: 3 }),
            Step::plain(StepOp::TwistAll { class: vec![3, -1] }),
        ],
    }
}

/// Expected normal form of the functor on the abstract component after the
/// nodal replay: twist by O(-2h), then the two right mutations.
pub fn singular_expected_functor() -> FunctorExpr {
    FunctorExpr(vec![
        FunctorAtom::Twist(vec![-2, 0]),
        FunctorAtom::RightMut(ObjectExpr::line(&[1, 0])),
        FunctorAtom::RightMut(ObjectExpr::line(&[0, 0])),
        FunctorAtom::Named("Phi".into()),
    ])
}

/// The same functor as stated through the blowup kernel directly:
/// R[O(-h)] ∘ R[O(-2h)] ∘ T[O(D-2h)] ∘ (pushforward-pullback); writing the
/// kernel as Phi = (pushforward-pullback)(D) turns the twist into T[-2h].
/// Normalizing must reproduce the replay's functor.
pub fn singular_alternative_functor() -> FunctorExpr {
    FunctorExpr(vec![
        FunctorAtom::RightMut(ObjectExpr::line(&[-1, 0])),
        FunctorAtom::RightMut(ObjectExpr::line(&[-2, 0])),
        FunctorAtom::Twist(vec![-2, 0]),
        FunctorAtom::Named("Phi".into()),
    ])
}

/// Case bundle: geometry, facts, script, and the expected functor.
pub struct CaseData {
    pub geometry: Geometry,
    pub facts: FactBase,
    pub script: Script,
    pub expected_functor: FunctorExpr,
}

pub fn case(name: &str) -> Option<CaseData> {
    match name {
        PLANE_CASE_NAME => Some(CaseData {
            geometry: Geometry::plane_case(),
            facts: plane_case_facts(),
            script: plane_script(),
            expected_functor: plane_expected_functor(),
        }),
        SINGULAR_CASE_NAME => Some(CaseData {
            geometry: Geometry::singular_case(),
            facts: singular_case_facts(),
            script: singular_script(),
            expected_functor: singular_expected_functor(),
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sodengine::replay::{replay_script, Verdict};
    use crate::sodengine::shadow::check_triangle_shadows;

    fn final_abstract_functor(g: &Geometry, sod: &Sod) -> FunctorExpr {
        sod.components
            .iter()
            .find_map(|c| match c {
                ComponentTerm::Abstract { functor, .. } => {
                    Some(g.normalize_functor(functor).unwrap())
                }
                _ => None,
            })
            .expect("an abstract component survives the replay")
    }

    #[test]
    fn plane_replay_matches() {
        let data = case(PLANE_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        match &replay.verdict {
            Verdict::Match { identifications } => {
                assert_eq!(identifications.len(), 1);
                assert_eq!(identifications[0].0, INTERESTING_BASE);
            }
            other => panic!("plane replay failed: {other:?}\ntrace: {:#?}", replay.trace),
        }
        assert_eq!(replay.triangles.len(), 3);
        assert_eq!(
            final_abstract_functor(&data.geometry, &replay.final_sod),
            data.expected_functor
        );
    }

    #[test]
    fn plane_fact_statuses() {
        let data = case(PLANE_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        let all_facts: Vec<_> = replay.trace.iter().flat_map(|r| r.facts.clone()).collect();
        let oracle = all_facts
            .iter()
            .filter(|f| matches!(f.status, crate::sodengine::FactStatus::Oracle { .. }))
            .count();
        let asserted = all_facts.len() - oracle;
        // four transpositions and three collapses, all certified by the oracle
        assert_eq!(oracle, 7);
        assert_eq!(asserted, 0);
    }

    #[test]
    fn plane_shadows_are_additive() {
        let data = case(PLANE_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        let checks =
            check_triangle_shadows(&data.geometry, &replay.triangles, (-3, 3)).unwrap();
        assert_eq!(checks.len(), 3);
        for c in &checks {
            assert!(c.additive, "{c:?}");
        }
    }

    #[test]
    fn singular_replay_matches() {
        let data = case(SINGULAR_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        match &replay.verdict {
            Verdict::Match { identifications } => {
                assert_eq!(identifications.len(), 1);
                assert_eq!(identifications[0].0, RESOLUTION_BASE);
            }
            other => panic!("nodal replay failed: {other:?}\ntrace: {:#?}", replay.trace),
        }
        assert_eq!(replay.triangles.len(), 3);
        assert_eq!(
            final_abstract_functor(&data.geometry, &replay.final_sod),
            data.expected_functor
        );
    }

    #[test]
    fn singular_functor_normalization_is_confluent() {
        // the directly-stated functor and the replay's accumulated functor
        // normalize identically
        let g = Geometry::singular_case();
        assert_eq!(
            g.normalize_functor(&singular_alternative_functor()).unwrap(),
            g.normalize_functor(&singular_expected_functor()).unwrap(),
        );
    }

    #[test]
    fn singular_shadows_are_additive() {
        let data = case(SINGULAR_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        let checks =
            check_triangle_shadows(&data.geometry, &replay.triangles, (-3, 3)).unwrap();
        assert_eq!(checks.len(), 3);
        for c in &checks {
            assert!(c.additive, "{c:?}");
        }
    }

    #[test]
    fn singular_collapse_results_are_expected() {
        let data = case(SINGULAR_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        let g = &data.geometry;
        // after the double-right group (trace index 10), pushforwards sit at
        // positions 3 and 5
        let after_double = &replay.trace[9].sod;
        assert_eq!(
            g.membership_form(&after_double.components[2]).unwrap(),
            g.membership_form(&ComponentTerm::Exceptional(push("alpha", "Q", &[0, 0])))
                .unwrap()
        );
        assert_eq!(
            g.membership_form(&after_double.components[4]).unwrap(),
            g.membership_form(&ComponentTerm::Exceptional(push("alpha", "Q", &[1, 0])))
                .unwrap()
        );
        // the left collapse (trace index 12) produces O(3h - D)
        let after_left = &replay.trace[11].sod;
        assert_eq!(
            g.membership_form(&after_left.components[2]).unwrap(),
            g.membership_form(&ComponentTerm::line(&[3, -1])).unwrap()
        );
    }

    #[test]
    fn plane_intermediate_states() {
        let data = case(PLANE_CASE_NAME).unwrap();
        let replay = replay_script(&data.script, &data.geometry, &data.facts).unwrap();
        let g = &data.geometry;
        // after step 2 the rotated O(-h) reappears as O(2H) at the end
        let after2 = &replay.trace[1].sod;
        assert_eq!(after2.components.last().unwrap(), &ComponentTerm::line(&[2, 0]));
        // after step 4 the front component is O(h - H)
        let after4 = &replay.trace[3].sod;
        assert_eq!(after4.components[0], ComponentTerm::line(&[-1, 1]));
        // after the triple-right group the decomposition interleaves
        // pullbacks and exceptional pushforwards
        let after6 = &replay.trace[10].sod;
        assert_eq!(
            g.membership_form(&after6.components[2]).unwrap(),
            g.membership_form(&ComponentTerm::Exceptional(push("i", "D", &[0, 0]))).unwrap()
        );
    }

    #[test]
    fn scripts_serialize() {
        for name in [PLANE_CASE_NAME, SINGULAR_CASE_NAME] {
            let data = case(name).unwrap();
            let s = serde_json::to_string_pretty(&data.script).unwrap();
            let back: Script = serde_json::from_str(&s).unwrap();
            assert_eq!(back, data.script);
        }
    }
}
