//! The fact base: oracle-backed and asserted orthogonality facts, plus
//! registered actions of mutations through abstract components.
//!
//! Every fact consumed during a replay lands in the trace with its status,
//! so a reader can tell exactly which steps are mechanically certified by
//! the cohomology oracle and which rest on a recorded categorical argument.

use serde::{Deserialize, Serialize};

use super::{class_add, ComponentTerm, Geometry, MutDir, ObjectExpr, SodError};
use crate::cohomology::CohTable;

/// What a fact claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    /// Hom^*(from, to) = 0.
    Orthogonal { from: String, to: String },
    /// Hom^*(from, to) is one-dimensional, concentrated in `degree`.
    HomOneDim { from: String, to: String, degree: u32 },
    /// A mutation through an abstract component acted by a registered rule.
    AbstractRule { base: String, object: String, result: String },
}

/// How the fact was certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactStatus {
    /// Computed by the cohomology oracle; the table is the evidence.
    Oracle { table: CohTable },
    /// Recorded categorical argument, not mechanically recomputed here.
    Asserted { justification: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactUse {
    pub kind: FactKind,
    pub status: FactStatus,
}

impl FactUse {
    pub fn hom_one_dim(
        g: &Geometry,
        from: &ObjectExpr,
        to: &ObjectExpr,
        degree: u32,
        table: CohTable,
    ) -> FactUse {
        FactUse {
            kind: FactKind::HomOneDim {
                from: g.render_object(from),
                to: g.render_object(to),
                degree,
            },
            status: FactStatus::Oracle { table },
        }
    }
}

/// An orthogonality statement admitted with a written justification instead
/// of an oracle computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertedOrthogonality {
    pub from: ObjectExpr,
    pub to: ObjectExpr,
    pub justification: String,
}

/// Registered action of mutating an exceptional object through an abstract
/// component: applicable line bundles are rewritten by adding a fixed class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractMutationRule {
    pub base: String,
    pub dir: MutDir,
    /// The rule applies to line bundles whose coordinates vanish outside
    /// this mask (true = coordinate may be nonzero).
    pub applies_mask: Vec<bool>,
    pub add: Vec<i64>,
    pub justification: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactBase {
    pub asserted: Vec<AssertedOrthogonality>,
    pub rules: Vec<AbstractMutationRule>,
}

impl FactBase {
    pub fn empty() -> FactBase {
        FactBase::default()
    }

    /// Certify Hom^*(a, b) = 0 for the forward direction of a transposition:
    /// oracle first (line-line and pushforward-line both reach it on models
    /// where the contraction geometry is known), then the asserted registry.
    pub fn certify_orthogonal(
        &self,
        g: &Geometry,
        a: &ComponentTerm,
        b: &ComponentTerm,
    ) -> Result<FactUse, SodError> {
        let missing = |detail: String| SodError::MissingFact {
            from: g.render_component(a),
            to: g.render_component(b),
            detail,
        };
        let (from, to) = match (a, b) {
            (ComponentTerm::Exceptional(x), ComponentTerm::Exceptional(y)) => {
                let (fx, _) = g.normalize_object(x);
                let (fy, _) = g.normalize_object(y);
                (fx, fy)
            }
            _ => {
                return Err(missing(
                    "orthogonality of non-exceptional components is never certified".into(),
                ))
            }
        };
        let kind = FactKind::Orthogonal {
            from: g.render_object(&from),
            to: g.render_object(&to),
        };
        // oracle routes
        let oracle_table = match (&from, &to) {
            (ObjectExpr::Line(l1), ObjectExpr::Line(l2)) => Some(g.ext_lines(l1, l2)),
            (ObjectExpr::Pushforward { sub, twist, .. }, ObjectExpr::Line(l2)) => {
                let sub_data = g.subvariety(sub)?;
                g.ext_pushforward_to_line(sub_data, twist, l2)
            }
            _ => None,
        };
        if let Some(table) = oracle_table {
            if table.is_zero() {
                return Ok(FactUse { kind, status: FactStatus::Oracle { table } });
            }
            if let CohTable::Determined(d) = &table {
                return Err(missing(format!("oracle refutes orthogonality: {d}")));
            }
            // undetermined: fall through to the asserted registry
        }
        for fact in &self.asserted {
            let (ff, _) = g.normalize_object(&fact.from);
            let (ft, _) = g.normalize_object(&fact.to);
            if ff == from && ft == to {
                return Ok(FactUse {
                    kind,
                    status: FactStatus::Asserted { justification: fact.justification.clone() },
                });
            }
        }
        Err(missing("no oracle route and no asserted fact".into()))
    }

    /// Rewrite an exceptional object mutated through an abstract component,
    /// if a rule is registered.
    pub fn apply_abstract_rule(
        &self,
        g: &Geometry,
        dir: MutDir,
        base: &str,
        obj: &ObjectExpr,
    ) -> Result<(ObjectExpr, FactUse), SodError> {
        let (core, shift) = g.normalize_object(obj);
        let coords = match &core {
            ObjectExpr::Line(c) => c.clone(),
            other => {
                return Err(SodError::UnsupportedMutation(format!(
                    "no registered action of {base} on {}",
                    g.render_object(other)
                )))
            }
        };
        for rule in &self.rules {
            if rule.base != base || rule.dir != dir {
                continue;
            }
            let applies = coords
                .iter()
                .zip(&rule.applies_mask)
                .all(|(c, allowed)| *allowed || *c == 0);
            if !applies {
                continue;
            }
            let result = ObjectExpr::Line(class_add(&coords, &rule.add)).shifted(shift);
            let fact = FactUse {
                kind: FactKind::AbstractRule {
                    base: base.to_string(),
                    object: g.render_object(obj),
                    result: g.render_object(&result),
                },
                status: FactStatus::Asserted { justification: rule.justification.clone() },
            };
            return Ok((result, fact));
        }
        Err(SodError::UnsupportedMutation(format!(
            "mutation through abstract component {base} has no registered action on {}",
            g.render_object(obj)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_certifies_orthogonal_line_pair() {
        let g = Geometry::plane_case();
        let fb = FactBase::empty();
        let a = ComponentTerm::line(&[1, 2]);
        let b = ComponentTerm::line(&[2, 0]);
        let fact = fb.certify_orthogonal(&g, &a, &b).unwrap();
        assert!(matches!(fact.status, FactStatus::Oracle { .. }));
    }

    #[test]
    fn oracle_refutes_non_orthogonal_pair() {
        let g = Geometry::plane_case();
        let fb = FactBase::empty();
        let a = ComponentTerm::line(&[0, 0]);
        let b = ComponentTerm::line(&[1, 0]);
        let err = fb.certify_orthogonal(&g, &a, &b).unwrap_err();
        match err {
            SodError::MissingFact { detail, .. } => assert!(detail.contains("refutes")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oracle_certifies_pullback_orthogonality_to_pushforwards() {
        // fiber degree -1 after duality: zero without knowing the normal bundle
        let g = Geometry::plane_case();
        let fb = FactBase::empty();
        let push = ObjectExpr::Pushforward { map: "i".into(), sub: "D".into(), twist: vec![1, 0] };
        let a = ComponentTerm::Exceptional(push.shifted(-1));
        let b = ComponentTerm::line(&[2, 0]);
        let fact = fb.certify_orthogonal(&g, &a, &b).unwrap();
        assert!(matches!(fact.status, FactStatus::Oracle { .. }));
        // the reverse direction has no oracle route and no asserted fact
        assert!(fb.certify_orthogonal(&g, &b, &a).is_err());
    }

    #[test]
    fn asserted_fact_fills_oracle_gap() {
        // a fiber-degree the oracle cannot settle falls back to the registry
        let g = Geometry::plane_case();
        let push = ObjectExpr::Pushforward { map: "i".into(), sub: "D".into(), twist: vec![0, 1] };
        let fb = FactBase {
            asserted: vec![AssertedOrthogonality {
                from: push.clone(),
                to: ObjectExpr::line(&[1, 0]),
                justification: "recorded categorical argument".into(),
            }],
            rules: vec![],
        };
        let a = ComponentTerm::Exceptional(push.shifted(-1));
        let b = ComponentTerm::line(&[1, 0]);
        let fact = fb.certify_orthogonal(&g, &a, &b).unwrap();
        assert!(matches!(fact.status, FactStatus::Asserted { .. }));
        // without the registry entry the same query is a missing fact
        assert!(FactBase::empty().certify_orthogonal(&g, &a, &b).is_err());
    }
}
