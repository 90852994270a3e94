//! The five decomposition moves: adjacent mutations, certified
//! transpositions, block rotations through the canonical class, global
//! twists, and collapse of pending mutations into concrete objects.

use serde::{Deserialize, Serialize};

use super::facts::{FactBase, FactUse};
use super::{
    class_add, class_scale, class_sub, ComponentTerm, FunctorAtom, FunctorExpr, Geometry, MutDir,
    ObjectExpr, PendingMutation, Sod, SodError,
};
use crate::cohomology::{CohDims, CohTable};

fn check_adjacent(sod: &Sod, k: usize) -> Result<(), SodError> {
    if k < 1 || k >= sod.len() {
        return Err(SodError::IndexOutOfRange { k, len: sod.len() });
    }
    Ok(())
}

/// Exceptional object of a component, for use as a mutated-through term.
fn through_object(g: &Geometry, term: &ComponentTerm) -> Result<ObjectExpr, SodError> {
    match term {
        ComponentTerm::Exceptional(obj) => {
            let (core, _) = g.normalize_object(obj);
            Ok(core)
        }
        other => Err(SodError::UnsupportedMutation(format!(
            "cannot mutate through non-exceptional component {}",
            g.render_component(other)
        ))),
    }
}

/// Wrap `of` in a pending mutation through `through`, cancelling a pending
/// inverse mutation through the same object.
fn wrap_mutation(dir: MutDir, through: ObjectExpr, of: ComponentTerm) -> ComponentTerm {
    if let ComponentTerm::Pending(p) = &of {
        let inverse = match dir {
            MutDir::Left => MutDir::Right,
            MutDir::Right => MutDir::Left,
        };
        if p.dir == inverse && p.through == through {
            return (*p.of).clone();
        }
    }
    ComponentTerm::Pending(PendingMutation { dir, through, of: Box::new(of) })
}

/// Left mutation at the adjacent pair (k, k+1), 1-indexed: component k+1
/// moves to position k wrapped in the left mutation through component k.
///
/// When component k is abstract, a registered mutation rule (if any) rewrites
/// the moving object instead; the rule use is recorded as a fact.
pub fn mutate_left(
    sod: &Sod,
    k: usize,
    g: &Geometry,
    facts: &FactBase,
) -> Result<(Sod, Vec<FactUse>), SodError> {
    check_adjacent(sod, k)?;
    let (i, j) = (k - 1, k);
    let mut used = Vec::new();
    let moved = match (&sod.components[i], &sod.components[j]) {
        (ComponentTerm::Abstract { base, .. }, ComponentTerm::Exceptional(obj)) => {
            let (rewritten, fact) = facts.apply_abstract_rule(g, MutDir::Left, base, obj)?;
            used.push(fact);
            ComponentTerm::Exceptional(rewritten)
        }
        (through_term, ComponentTerm::Abstract { base, functor }) => {
            let through = through_object(g, through_term)?;
            ComponentTerm::Abstract {
                base: base.clone(),
                functor: g.normalize_functor(&FunctorExpr::compose(
                    FunctorAtom::LeftMut(through),
                    functor,
                ))?,
            }
        }
        (through_term, moving) => {
            let through = through_object(g, through_term)?;
            wrap_mutation(MutDir::Left, through, moving.clone())
        }
    };
    let mut components = sod.components.clone();
    components[j] = components[i].clone();
    components[i] = moved;
    Ok((Sod { ambient: sod.ambient.clone(), components }, used))
}

/// Right mutation at the adjacent pair (k, k+1): component k moves to
/// position k+1 wrapped in the right mutation through component k+1.
pub fn mutate_right(
    sod: &Sod,
    k: usize,
    g: &Geometry,
    facts: &FactBase,
) -> Result<(Sod, Vec<FactUse>), SodError> {
    check_adjacent(sod, k)?;
    let (i, j) = (k - 1, k);
    let mut used = Vec::new();
    let moved = match (&sod.components[i], &sod.components[j]) {
        (ComponentTerm::Exceptional(obj), ComponentTerm::Abstract { base, .. }) => {
            let (rewritten, fact) = facts.apply_abstract_rule(g, MutDir::Right, base, obj)?;
            used.push(fact);
            ComponentTerm::Exceptional(rewritten)
        }
        (ComponentTerm::Abstract { base, functor }, through_term) => {
            let through = through_object(g, through_term)?;
            ComponentTerm::Abstract {
                base: base.clone(),
                functor: g.normalize_functor(&FunctorExpr::compose(
                    FunctorAtom::RightMut(through),
                    functor,
                ))?,
            }
        }
        (moving, through_term) => {
            let through = through_object(g, through_term)?;
            wrap_mutation(MutDir::Right, through, moving.clone())
        }
    };
    let mut components = sod.components.clone();
    components[i] = components[j].clone();
    components[j] = moved;
    Ok((Sod { ambient: sod.ambient.clone(), components }, used))
}

/// Transpose the adjacent pair (i, i+1). The decomposition already forces
/// Hom(later, earlier) = 0; the move additionally needs the forward
/// orthogonality Hom(C_i, C_{i+1}) = 0, certified by the oracle or by a
/// registered asserted fact.
pub fn transpose(
    sod: &Sod,
    i: usize,
    g: &Geometry,
    facts: &FactBase,
) -> Result<(Sod, Vec<FactUse>), SodError> {
    check_adjacent(sod, i)?;
    let (a, b) = (&sod.components[i - 1], &sod.components[i]);
    let fact = facts.certify_orthogonal(g, a, b)?;
    let mut components = sod.components.clone();
    components.swap(i - 1, i);
    Ok((Sod { ambient: sod.ambient.clone(), components }, vec![fact]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSel {
    Prefix,
    Suffix,
}

/// Rotate a prefix or suffix block through the orthogonal complement of the
/// rest. A suffix block moves to the front twisted by the canonical class; a
/// prefix block moves to the end twisted by the anticanonical class.
pub fn serre_rotate(sod: &Sod, block: BlockSel, len: usize, g: &Geometry) -> Result<Sod, SodError> {
    if len == 0 || len >= sod.len() {
        return Err(SodError::IndexOutOfRange { k: len, len: sod.len() });
    }
    let n = sod.len();
    let (twist, range) = match block {
        BlockSel::Suffix => (g.canonical.clone(), n - len..n),
        BlockSel::Prefix => (class_scale(&g.canonical, -1), 0..len),
    };
    let mut moved = Vec::with_capacity(len);
    for idx in range.clone() {
        moved.push(g.twist_component(&sod.components[idx], &twist)?);
    }
    let mut rest: Vec<ComponentTerm> = sod
        .components
        .iter()
        .enumerate()
        .filter(|(idx, _)| !range.contains(idx))
        .map(|(_, c)| c.clone())
        .collect();
    let components = match block {
        BlockSel::Suffix => {
            moved.extend(rest);
            moved
        }
        BlockSel::Prefix => {
            rest.extend(moved);
            rest
        }
    };
    Ok(Sod { ambient: sod.ambient.clone(), components })
}

/// Tensor the whole decomposition by a line bundle; an autoequivalence, so
/// no facts are needed.
pub fn twist_all(sod: &Sod, class: &[i64], g: &Geometry) -> Result<Sod, SodError> {
    let components = sod
        .components
        .iter()
        .map(|c| g.twist_component(c, class))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sod { ambient: sod.ambient.clone(), components })
}

/// The three exact triangles a collapse certifies; chi additivity
/// chi(mid) = chi(sub) + chi(quot) is checked over a twist range afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub sub: ObjectExpr,
    pub mid: ObjectExpr,
    pub quot: ObjectExpr,
}

/// Collapse the pending mutation at position k (1-indexed) into a concrete
/// object, certified by a one-dimensional Hom pattern and an effective
/// divisor witness.
///
/// Supported patterns:
/// - right mutation of O(L) through O(M) with Hom(O(L), O(M)) = k in degree
///   0 and M - L the witness class W of a subvariety: the cokernel sequence
///   identifies the mutation with the pushforward of O_W(M), shifted by -1;
/// - left mutation of O(L) through a pushforward off W with Ext in a single
///   degree 1 and (L + W - twist) restricting to zero on W: the mutation is
///   O(L + W);
/// - left mutation of O(L) through O(M) with Hom(O(M), O(L)) = k in degree 0
///   and L - M the witness W: the mutation is the pushforward of O_W(L).
pub fn collapse_exceptional_mutation(
    sod: &Sod,
    k: usize,
    g: &Geometry,
    _facts: &FactBase,
) -> Result<(Sod, Vec<FactUse>, TriangleRecord), SodError> {
    if k < 1 || k > sod.len() {
        return Err(SodError::IndexOutOfRange { k, len: sod.len() });
    }
    let pending = match &sod.components[k - 1] {
        ComponentTerm::Pending(p) => p.clone(),
        other => {
            return Err(SodError::NoCollapseRule(format!(
                "component {} is not a pending mutation",
                g.render_component(other)
            )))
        }
    };
    let of_obj = match pending.of.as_ref() {
        ComponentTerm::Exceptional(obj) => {
            let (core, _) = g.normalize_object(obj);
            core
        }
        other => {
            return Err(SodError::NoCollapseRule(format!(
                "pending mutation of a non-exceptional component {}",
                g.render_component(other)
            )))
        }
    };
    let one_dim = |table: &CohTable, degree: u32| -> bool {
        matches!(table, CohTable::Determined(d) if *d == CohDims::single(degree, 1))
    };
    let (result, fact, triangle) = match (pending.dir, &pending.through, &of_obj) {
        (MutDir::Right, ObjectExpr::Line(m), ObjectExpr::Line(l)) => {
            let table = g.ext_lines(l, m);
            if !one_dim(&table, 0) {
                return Err(SodError::NoCollapseRule(format!(
                    "Hom({}, {}) is not one-dimensional in degree 0: {table:?}",
                    g.render_object(&of_obj),
                    g.render_object(&pending.through)
                )));
            }
            let w = class_sub(m, l);
            let sub = g.subvariety_with_witness(&w).ok_or_else(|| {
                SodError::NoCollapseRule(format!(
                    "difference class {w:?} is not a registered effective witness"
                ))
            })?;
            let push = ObjectExpr::Pushforward {
                map: sub.map.clone(),
                sub: sub.label.clone(),
                twist: g.canonical_pushforward_twist(sub, m),
            };
            let result = push.clone().shifted(-1);
            let fact = FactUse::hom_one_dim(g, &of_obj, &pending.through, 0, table);
            let triangle = TriangleRecord {
                sub: result.clone(),
                mid: of_obj.clone(),
                quot: pending.through.clone(),
            };
            (result, fact, triangle)
        }
        (MutDir::Left, ObjectExpr::Pushforward { sub, twist, .. }, ObjectExpr::Line(l)) => {
            let sub_data = g.subvariety(sub)?;
            let table = g
                .ext_pushforward_to_line(sub_data, twist, l)
                .ok_or_else(|| {
                    SodError::NoCollapseRule(format!(
                        "no Ext oracle from pushforwards off {sub} on this model"
                    ))
                })?;
            if !one_dim(&table, 1) {
                return Err(SodError::NoCollapseRule(format!(
                    "Ext({}, {}) is not one-dimensional in degree 1: {table:?}",
                    g.render_object(&pending.through),
                    g.render_object(&of_obj)
                )));
            }
            let target = class_add(l, &sub_data.witness);
            // the cokernel sequence needs O_W(target) = O_W(twist)
            if !g.restricts_to_zero(sub_data, &class_sub(&target, twist)) {
                return Err(SodError::NoCollapseRule(format!(
                    "witness mismatch: {} does not restrict to the mutated-through twist",
                    g.render_line_public(&target)
                )));
            }
            let result = ObjectExpr::Line(target.clone());
            let fact = FactUse::hom_one_dim(g, &pending.through, &of_obj, 1, table);
            let triangle = TriangleRecord {
                sub: pending.through.clone().shifted(-1),
                mid: of_obj.clone(),
                quot: result.clone(),
            };
            (result, fact, triangle)
        }
        (MutDir::Left, ObjectExpr::Line(m), ObjectExpr::Line(l)) => {
            let table = g.ext_lines(m, l);
            if !one_dim(&table, 0) {
                return Err(SodError::NoCollapseRule(format!(
                    "Hom({}, {}) is not one-dimensional in degree 0: {table:?}",
                    g.render_object(&pending.through),
                    g.render_object(&of_obj)
                )));
            }
            let w = class_sub(l, m);
            let sub = g.subvariety_with_witness(&w).ok_or_else(|| {
                SodError::NoCollapseRule(format!(
                    "difference class {w:?} is not a registered effective witness"
                ))
            })?;
            let result = ObjectExpr::Pushforward {
                map: sub.map.clone(),
                sub: sub.label.clone(),
                twist: g.canonical_pushforward_twist(sub, l),
            };
            let fact = FactUse::hom_one_dim(g, &pending.through, &of_obj, 0, table);
            let triangle = TriangleRecord {
                sub: pending.through.clone(),
                mid: of_obj.clone(),
                quot: result.clone(),
            };
            (result, fact, triangle)
        }
        _ => {
            return Err(SodError::NoCollapseRule(format!(
                "no rule for {} through {}",
                g.render_component(&pending.of),
                g.render_object(&pending.through)
            )))
        }
    };
    let mut components = sod.components.clone();
    components[k - 1] = ComponentTerm::Exceptional(result);
    Ok((Sod { ambient: sod.ambient.clone(), components }, vec![fact], triangle))
}

impl Geometry {
    pub(crate) fn render_line_public(&self, c: &[i64]) -> String {
        self.render_object(&ObjectExpr::Line(c.to_vec()))
    }
}
