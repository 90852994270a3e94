//! Scripted replay: run a step list from a start decomposition, record every
//! intermediate decomposition and every fact consumed, and compare the final
//! result against the declared target.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::engine::{
    collapse_exceptional_mutation, mutate_left, mutate_right, serre_rotate, transpose, twist_all,
    BlockSel, TriangleRecord,
};
use super::facts::{FactBase, FactUse};
use super::{Class, ComponentTerm, Geometry, Sod, SodError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepOp {
    MutateLeft { k: usize },
    MutateRight { k: usize },
    Transpose { i: usize },
    SerreRotate { block: BlockSel, len: usize },
    TwistAll { class: Class },
    Collapse { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub op: StepOp,
    /// Steps sharing a group tag encode one simultaneous move; the engine
    /// checks they are disjoint.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group: Option<String>,
}

impl Step {
    pub fn plain(op: StepOp) -> Step {
        Step { op, group: None }
    }

    pub fn grouped(op: StepOp, group: &str) -> Step {
        Step { op, group: Some(group.to_string()) }
    }
}

/// A replayable mutation script with declared start and target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<String>,
    pub start: Sod,
    pub target: Sod,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    pub op: StepOp,
    pub sod: Sod,
    pub rendered: String,
    pub facts: Vec<FactUse>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triangle: Option<TriangleRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Match {
        /// Pairings of abstract target components with the abstract
        /// components that landed in their slots.
        identifications: Vec<(String, String)>,
    },
    Mismatch {
        first_difference: usize,
        found: String,
        expected: String,
    },
    Aborted {
        at_step: usize,
        error: String,
    },
}

impl Verdict {
    pub fn is_match(&self) -> bool {
        matches!(self, Verdict::Match { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub trace: Vec<StepRecord>,
    pub final_sod: Sod,
    pub verdict: Verdict,
    pub triangles: Vec<TriangleRecord>,
}

/// Compare against the target: concrete components must agree termwise after
/// normalization; an abstract target component matches an abstract final
/// component, recording the induced identification.
fn compare_to_target(g: &Geometry, final_sod: &Sod, target: &Sod) -> Result<Verdict, SodError> {
    if final_sod.len() != target.len() {
        return Ok(Verdict::Mismatch {
            first_difference: 0,
            found: format!("{} components", final_sod.len()),
            expected: format!("{} components", target.len()),
        });
    }
    let mut identifications = Vec::new();
    for (idx, (got, want)) in final_sod.components.iter().zip(&target.components).enumerate() {
        match (got, want) {
            (ComponentTerm::Abstract { .. }, ComponentTerm::Abstract { base, .. }) => {
                identifications.push((base.clone(), g.render_component(got)));
            }
            _ => {
                if g.membership_form(got)? != g.membership_form(want)? {
                    return Ok(Verdict::Mismatch {
                        first_difference: idx + 1,
                        found: g.render_component(got),
                        expected: g.render_component(want),
                    });
                }
            }
        }
    }
    Ok(Verdict::Match { identifications })
}

/// Indices rewritten by a step, for the simultaneity check.
fn rewrite_span(op: &StepOp) -> Option<(usize, usize)> {
    match op {
        StepOp::MutateLeft { k } | StepOp::MutateRight { k } => Some((*k, *k + 1)),
        StepOp::Collapse { k } => Some((*k, *k)),
        _ => None,
    }
}

/// Verify simultaneity: mutations in one group touch pairwise disjoint
/// adjacent pairs (their collapses live inside those pairs), and grouped
/// transpositions never move a component that another step in the group
/// passes through.
fn check_groups(g: &Geometry, script: &Script, states: &[Sod]) -> Result<(), SodError> {
    let mut groups: BTreeMap<String, Vec<(usize, &Step)>> = BTreeMap::new();
    for (idx, step) in script.steps.iter().enumerate() {
        if let Some(tag) = &step.group {
            groups.entry(tag.clone()).or_default().push((idx, step));
        }
    }
    for (tag, steps) in groups {
        let mut mutation_spans: Vec<(usize, usize)> = Vec::new();
        let mut movers: Vec<ComponentTerm> = Vec::new();
        let mut passed: Vec<ComponentTerm> = Vec::new();
        for (idx, step) in steps {
            match &step.op {
                StepOp::MutateLeft { .. } | StepOp::MutateRight { .. } => {
                    let span = rewrite_span(&step.op).unwrap();
                    for prior in &mutation_spans {
                        if span.0 <= prior.1 && prior.0 <= span.1 {
                            return Err(SodError::GroupOverlap {
                                group: tag.clone(),
                                detail: format!(
                                    "mutation pairs {prior:?} and {span:?} intersect"
                                ),
                            });
                        }
                    }
                    mutation_spans.push(span);
                }
                StepOp::Collapse { .. } => {}
                StepOp::Transpose { i } => {
                    let before = &states[idx];
                    let mover = g.membership_form(&before.components[*i - 1])?;
                    let past = g.membership_form(&before.components[*i])?;
                    if passed.contains(&mover) || movers.contains(&past) {
                        return Err(SodError::GroupOverlap {
                            group: tag.clone(),
                            detail: format!(
                                "component {} both moves and is passed through",
                                g.render_component(&before.components[*i - 1])
                            ),
                        });
                    }
                    if !movers.contains(&mover) {
                        movers.push(mover);
                    }
                    if !passed.contains(&past) {
                        passed.push(past);
                    }
                }
                other => {
                    return Err(SodError::GroupOverlap {
                        group: tag.clone(),
                        detail: format!("step {other:?} cannot be part of a simultaneous group"),
                    });
                }
            }
        }
    }
    Ok(())
}

fn validate_classes(g: &Geometry, sod: &Sod) -> Result<(), SodError> {
    fn check_obj(g: &Geometry, obj: &super::ObjectExpr) -> Result<(), SodError> {
        let rank = g.basis.len();
        match obj {
            super::ObjectExpr::Line(c) if c.len() != rank => Err(SodError::BadClass(format!(
                "class {c:?} has {} coordinates, ambient rank is {rank}",
                c.len()
            ))),
            super::ObjectExpr::Pushforward { twist, .. } if twist.len() != rank => {
                Err(SodError::BadClass(format!("twist {twist:?} does not match rank {rank}")))
            }
            super::ObjectExpr::Shift(inner, _) => check_obj(g, inner),
            _ => Ok(()),
        }
    }
    fn check_term(g: &Geometry, term: &ComponentTerm) -> Result<(), SodError> {
        match term {
            ComponentTerm::Exceptional(obj) => check_obj(g, obj),
            ComponentTerm::Abstract { .. } => Ok(()),
            ComponentTerm::Pending(p) => {
                check_obj(g, &p.through)?;
                check_term(g, &p.of)
            }
        }
    }
    for term in &sod.components {
        check_term(g, term)?;
    }
    Ok(())
}

/// Run the script. Any step error aborts with the partial trace preserved
/// and the verdict marked accordingly.
pub fn replay_script(script: &Script, g: &Geometry, facts: &FactBase) -> Result<Replay, SodError> {
    validate_classes(g, &script.start)?;
    validate_classes(g, &script.target)?;
    for step in &script.steps {
        if let StepOp::TwistAll { class } = &step.op {
            if class.len() != g.basis.len() {
                return Err(SodError::BadClass(format!(
                    "twist class {class:?} does not match ambient rank {}",
                    g.basis.len()
                )));
            }
        }
    }
    let mut sod = script.start.clone();
    let mut trace = Vec::with_capacity(script.steps.len());
    let mut triangles = Vec::new();
    // decomposition before each step, for the group checks
    let mut states: Vec<Sod> = Vec::with_capacity(script.steps.len());
    for (idx, step) in script.steps.iter().enumerate() {
        states.push(sod.clone());
        let outcome: Result<(Sod, Vec<FactUse>, Option<TriangleRecord>), SodError> =
            match &step.op {
                StepOp::MutateLeft { k } => {
                    mutate_left(&sod, *k, g, facts).map(|(s, f)| (s, f, None))
                }
                StepOp::MutateRight { k } => {
                    mutate_right(&sod, *k, g, facts).map(|(s, f)| (s, f, None))
                }
                StepOp::Transpose { i } => {
                    transpose(&sod, *i, g, facts).map(|(s, f)| (s, f, None))
                }
                StepOp::SerreRotate { block, len } => {
                    serre_rotate(&sod, *block, *len, g).map(|s| (s, Vec::new(), None))
                }
                StepOp::TwistAll { class } => {
                    twist_all(&sod, class, g).map(|s| (s, Vec::new(), None))
                }
                StepOp::Collapse { k } => collapse_exceptional_mutation(&sod, *k, g, facts)
                    .map(|(s, f, t)| (s, f, Some(t))),
            };
        match outcome {
            Ok((next, facts_used, triangle)) => {
                if let Some(t) = &triangle {
                    triangles.push(t.clone());
                }
                trace.push(StepRecord {
                    index: idx + 1,
                    op: step.op.clone(),
                    rendered: g.render_sod(&next),
                    sod: next.clone(),
                    facts: facts_used,
                    triangle,
                });
                sod = next;
            }
            Err(e) => {
                return Ok(Replay {
                    trace,
                    final_sod: sod,
                    verdict: Verdict::Aborted { at_step: idx + 1, error: e.to_string() },
                    triangles,
                });
            }
        }
    }
    check_groups(g, script, &states)?;
    let verdict = compare_to_target(g, &sod, &script.target)?;
    Ok(Replay { trace, final_sod: sod, verdict, triangles })
}
