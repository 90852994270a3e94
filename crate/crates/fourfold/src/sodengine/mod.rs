//! Symbolic mutation calculus on semiorthogonal decompositions.
//!
//! Components are exceptional objects (line bundles and pushforwards from
//! contracted subvarieties, with tracked shifts), abstract subcategories
//! carrying a functor expression, or pending mutations awaiting a collapse.
//! Equality is syntactic on normal forms: shifts never affect membership,
//! pushforward twists are reduced modulo the restriction kernel of their
//! subvariety, and functor compositions push twist atoms outward past
//! mutation atoms (twisting the mutated-through object), then cancel
//! adjacent mutually inverse mutations.

pub mod builtin;
pub mod engine;
pub mod facts;
pub mod replay;
pub mod shadow;

pub use engine::{
    collapse_exceptional_mutation, mutate_left, mutate_right, serre_rotate, transpose, twist_all,
    BlockSel, TriangleRecord,
};
pub use facts::{FactBase, FactKind, FactStatus, FactUse};
pub use replay::{replay_script, Replay, Script, Step, StepOp, StepRecord, Verdict};
pub use shadow::{check_triangle_shadows, hilbert_shadow, ShadowCheck};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{
    chi_plane_ty, chi_singular_ty, ext_quadric_pushforward_to_line, spaces, table_singular_ty,
    CohTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SodError {
    #[error("component index {k} out of range for a decomposition of length {len}")]
    IndexOutOfRange { k: usize, len: usize },
    #[error("missing orthogonality fact for ({from} , {to}): {detail}")]
    MissingFact { from: String, to: String, detail: String },
    #[error("no collapse rule applies: {0}")]
    NoCollapseRule(String),
    #[error("unsupported mutation: {0}")]
    UnsupportedMutation(String),
    #[error("class arithmetic outside the ambient model: {0}")]
    BadClass(String),
    #[error("steps in group `{group}` overlap: {detail}")]
    GroupOverlap { group: String, detail: String },
    #[error("hilbert shadow undefined: {0}")]
    ShadowUndefined(String),
    #[error("unknown ambient model `{0}`")]
    UnknownAmbient(String),
    #[error("unknown subvariety `{0}`")]
    UnknownSubvariety(String),
}

/// Divisor class in the ambient basis, small-integer coordinates.
pub type Class = Vec<i64>;

pub fn class_add(a: &[i64], b: &[i64]) -> Class {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn class_sub(a: &[i64], b: &[i64]) -> Class {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn class_scale(a: &[i64], k: i64) -> Class {
    a.iter().map(|x| x * k).collect()
}

pub fn class_is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Object of the decomposition: a line bundle, a pushforward of a twisted
/// structure sheaf from a named subvariety (twist recorded as an ambient
/// class), a shift, or an opaque label (never manipulated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectExpr {
    Line(Class),
    Pushforward { map: String, sub: String, twist: Class },
    Shift(Box<ObjectExpr>, i32),
    Opaque(String),
}

impl ObjectExpr {
    pub fn line(coords: &[i64]) -> Self {
        ObjectExpr::Line(coords.to_vec())
    }

    pub fn shifted(self, n: i32) -> Self {
        if n == 0 {
            self
        } else {
            ObjectExpr::Shift(Box::new(self), n)
        }
    }
}

/// Atom in a functor composition, stored outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctorAtom {
    LeftMut(ObjectExpr),
    RightMut(ObjectExpr),
    Twist(Class),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FunctorExpr(pub Vec<FunctorAtom>);

impl FunctorExpr {
    pub fn named(label: &str) -> Self {
        FunctorExpr(vec![FunctorAtom::Named(label.to_string())])
    }

    pub fn compose(outer: FunctorAtom, inner: &FunctorExpr) -> FunctorExpr {
        let mut atoms = Vec::with_capacity(inner.0.len() + 1);
        atoms.push(outer);
        atoms.extend(inner.0.iter().cloned());
        FunctorExpr(atoms)
    }
}

/// A pending mutation: the canonical relabel `L[X](C)` / `R[X](C)` of a
/// component mutated through an exceptional object, before any collapse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutDir {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingMutation {
    pub dir: MutDir,
    pub through: ObjectExpr,
    pub of: Box<ComponentTerm>,
}

/// One component of a semiorthogonal decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentTerm {
    Exceptional(ObjectExpr),
    Abstract { base: String, functor: FunctorExpr },
    Pending(PendingMutation),
}

impl ComponentTerm {
    pub fn line(coords: &[i64]) -> Self {
        ComponentTerm::Exceptional(ObjectExpr::line(coords))
    }

    pub fn abstract_named(base: &str, functor_label: &str) -> Self {
        ComponentTerm::Abstract { base: base.to_string(), functor: FunctorExpr::named(functor_label) }
    }
}

/// Ordered semiorthogonal decomposition over a named ambient model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sod {
    pub ambient: String,
    pub components: Vec<ComponentTerm>,
}

impl Sod {
    pub fn new(ambient: &str, components: Vec<ComponentTerm>) -> Self {
        assert!(!components.is_empty(), "a decomposition has at least one component");
        Sod { ambient: ambient.to_string(), components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Registered subvariety of an ambient model: the class cut out by its
/// defining section, the pushforward map label, and the kernel of ambient
/// restriction (twists of a pushforward are only defined modulo it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subvariety {
    pub label: String,
    pub map: String,
    pub witness: Class,
    pub restriction_kernel: Vec<Class>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometryKind {
    /// Blowup of a cubic along a plane, basis (H, h), quadric fibration
    /// inside a projectivized bundle.
    PlaneBlowup,
    /// Blowup of a nodal cubic at the node, basis (h, D), also the blowup of
    /// P^4 along a (2,3) surface.
    NodalBlowup,
}

/// Ambient geometry: everything the engine needs to twist, restrict, and
/// evaluate cohomology on one of the two blowup models.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub name: String,
    pub kind: GeometryKind,
    pub basis: Vec<String>,
    pub canonical: Class,
    pub hyperplane: Class,
    pub subvarieties: Vec<Subvariety>,
}

impl Geometry {
    pub fn plane_case() -> Geometry {
        Geometry {
            name: crate::piclattice::PLANE_CASE.to_string(),
            kind: GeometryKind::PlaneBlowup,
            basis: vec!["H".into(), "h".into()],
            canonical: vec![-2, -1],
            hyperplane: vec![1, 0],
            subvarieties: vec![Subvariety {
                label: "D".into(),
                map: "i".into(),
                witness: vec![1, -1],
                restriction_kernel: vec![],
            }],
        }
    }

    pub fn singular_case() -> Geometry {
        Geometry {
            name: crate::piclattice::SINGULAR_CASE.to_string(),
            kind: GeometryKind::NodalBlowup,
            basis: vec!["h".into(), "D".into()],
            canonical: vec![-5, 1],
            hyperplane: vec![3, -1],
            subvarieties: vec![Subvariety {
                label: "Q".into(),
                map: "alpha".into(),
                witness: vec![2, -1],
                restriction_kernel: vec![vec![3, -1]],
            }],
        }
    }

    pub fn by_name(name: &str) -> Result<Geometry, SodError> {
        match name {
            n if n == crate::piclattice::PLANE_CASE => Ok(Geometry::plane_case()),
            n if n == crate::piclattice::SINGULAR_CASE => Ok(Geometry::singular_case()),
            other => Err(SodError::UnknownAmbient(other.to_string())),
        }
    }

    pub fn subvariety(&self, label: &str) -> Result<&Subvariety, SodError> {
        self.subvarieties
            .iter()
            .find(|s| s.label == label)
            .ok_or_else(|| SodError::UnknownSubvariety(label.to_string()))
    }

    /// Subvariety whose witness class equals the given class exactly.
    pub fn subvariety_with_witness(&self, class: &[i64]) -> Option<&Subvariety> {
        self.subvarieties.iter().find(|s| s.witness == class)
    }

    /// Euler characteristic of a line bundle.
    pub fn chi_line(&self, class: &[i64]) -> i64 {
        match self.kind {
            GeometryKind::PlaneBlowup => chi_plane_ty(class),
            GeometryKind::NodalBlowup => chi_singular_ty(class),
        }
    }

    /// Cohomology table of a line bundle, where the oracle reaches.
    pub fn line_table(&self, class: &[i64]) -> CohTable {
        match self.kind {
            GeometryKind::PlaneBlowup => spaces::plane_case_blowup()
                .line_bundle_coh(class)
                .expect("rank-2 classes on the plane blowup"),
            GeometryKind::NodalBlowup => table_singular_ty(class),
        }
    }

    /// Ext table between line bundles: table of the difference class.
    pub fn ext_lines(&self, from: &[i64], to: &[i64]) -> CohTable {
        self.line_table(&class_sub(to, from))
    }

    /// Ext table from a pushforward off a subvariety to a line bundle, via
    /// relative duality along the contraction.
    ///
    /// On the nodal model the contracted quadric is fully known. On the
    /// plane model the exceptional divisor is a P^1-bundle over the plane
    /// with unknown splitting type, but duality twists by O(D), which has
    /// fiber degree -1; whenever the remaining difference class is a
    /// pullback (h-coefficient zero), the relative Euler rule forces total
    /// vanishing with no further geometric input, so the oracle can certify
    /// exactly those instances.
    pub fn ext_pushforward_to_line(
        &self,
        sub: &Subvariety,
        twist: &[i64],
        line: &[i64],
    ) -> Option<CohTable> {
        match (self.kind, sub.label.as_str()) {
            (GeometryKind::NodalBlowup, "Q") => {
                Some(ext_quadric_pushforward_to_line(twist, line))
            }
            (GeometryKind::PlaneBlowup, "D") => {
                let diff = class_sub(line, twist);
                if diff[1] == 0 {
                    Some(CohTable::Determined(crate::cohomology::CohDims::zero()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Reduce a pushforward twist modulo the restriction kernel to the
    /// canonical representative (kernel multiples removed greedily).
    pub fn canonical_pushforward_twist(&self, sub: &Subvariety, twist: &[i64]) -> Class {
        let mut t = twist.to_vec();
        for k in &sub.restriction_kernel {
            // kernel vectors here have a unit-magnitude pivot coordinate;
            // eliminate t's coordinate at that pivot
            if let Some(pivot) = k.iter().position(|&x| x == 1 || x == -1) {
                let factor = t[pivot] * k[pivot];
                t = class_sub(&t, &class_scale(k, factor));
            }
        }
        t
    }

    /// Whether a class restricts to zero on the subvariety (lies in the
    /// kernel span).
    pub fn restricts_to_zero(&self, sub: &Subvariety, class: &[i64]) -> bool {
        class_is_zero(&self.canonical_pushforward_twist(sub, class))
    }

    /// Normal form of an object: shifts flattened and hoisted, pushforward
    /// twists canonicalized.
    pub fn normalize_object(&self, obj: &ObjectExpr) -> (ObjectExpr, i32) {
        match obj {
            ObjectExpr::Line(c) => (ObjectExpr::Line(c.clone()), 0),
            ObjectExpr::Opaque(s) => (ObjectExpr::Opaque(s.clone()), 0),
            ObjectExpr::Pushforward { map, sub, twist } => {
                let canon = match self.subvariety(sub) {
                    Ok(s) => self.canonical_pushforward_twist(s, twist),
                    Err(_) => twist.clone(),
                };
                (ObjectExpr::Pushforward { map: map.clone(), sub: sub.clone(), twist: canon }, 0)
            }
            ObjectExpr::Shift(inner, n) => {
                let (core, m) = self.normalize_object(inner);
                (core, m + n)
            }
        }
    }

    /// Twist an object by a line-bundle class (projection formula for
    /// pushforwards: the ambient twist adds, then canonicalizes).
    pub fn twist_object(&self, obj: &ObjectExpr, class: &[i64]) -> Result<ObjectExpr, SodError> {
        Ok(match obj {
            ObjectExpr::Line(c) => ObjectExpr::Line(class_add(c, class)),
            ObjectExpr::Pushforward { map, sub, twist } => {
                let s = self.subvariety(sub)?;
                let t = self.canonical_pushforward_twist(s, &class_add(twist, class));
                ObjectExpr::Pushforward { map: map.clone(), sub: sub.clone(), twist: t }
            }
            ObjectExpr::Shift(inner, n) => {
                ObjectExpr::Shift(Box::new(self.twist_object(inner, class)?), *n)
            }
            ObjectExpr::Opaque(s) => {
                return Err(SodError::UnsupportedMutation(format!(
                    "cannot twist opaque object `{s}`"
                )))
            }
        })
    }

    /// Twist a whole component.
    pub fn twist_component(
        &self,
        term: &ComponentTerm,
        class: &[i64],
    ) -> Result<ComponentTerm, SodError> {
        Ok(match term {
            ComponentTerm::Exceptional(obj) => {
                ComponentTerm::Exceptional(self.twist_object(obj, class)?)
            }
            ComponentTerm::Abstract { base, functor } => ComponentTerm::Abstract {
                base: base.clone(),
                functor: self.normalize_functor(&FunctorExpr::compose(
                    FunctorAtom::Twist(class.to_vec()),
                    functor,
                ))?,
            },
            ComponentTerm::Pending(p) => ComponentTerm::Pending(PendingMutation {
                dir: p.dir,
                through: self.twist_object(&p.through, class)?,
                of: Box::new(self.twist_component(&p.of, class)?),
            }),
        })
    }

    /// Normal form of a functor expression: twist atoms bubble outward
    /// (leftward), twisting every mutation object they pass; adjacent twists
    /// merge; zero twists drop; adjacent mutually inverse mutations cancel.
    pub fn normalize_functor(&self, f: &FunctorExpr) -> Result<FunctorExpr, SodError> {
        let mut atoms = f.0.clone();
        // normalize mutation objects
        for a in atoms.iter_mut() {
            match a {
                FunctorAtom::LeftMut(o) | FunctorAtom::RightMut(o) => {
                    let (core, _) = self.normalize_object(o);
                    *o = core;
                }
                FunctorAtom::Twist(_) | FunctorAtom::Named(_) => {}
            }
        }
        // bubble twists left
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < atoms.len() {
                let do_swap = matches!(
                    (&atoms[i], &atoms[i + 1]),
                    (FunctorAtom::LeftMut(_) | FunctorAtom::RightMut(_), FunctorAtom::Twist(_))
                );
                if do_swap {
                    let twist = match &atoms[i + 1] {
                        FunctorAtom::Twist(t) => t.clone(),
                        _ => unreachable!(),
                    };
                    let neg = class_scale(&twist, -1);
                    let new_mut = match &atoms[i] {
                        FunctorAtom::LeftMut(o) => FunctorAtom::LeftMut(self.twist_object(o, &neg)?),
                        FunctorAtom::RightMut(o) => {
                            FunctorAtom::RightMut(self.twist_object(o, &neg)?)
                        }
                        _ => unreachable!(),
                    };
                    atoms[i] = FunctorAtom::Twist(twist);
                    atoms[i + 1] = new_mut;
                    changed = true;
                }
                i += 1;
            }
            // merge and drop twists
            let mut merged: Vec<FunctorAtom> = Vec::with_capacity(atoms.len());
            for a in atoms.drain(..) {
                match (merged.last_mut(), a) {
                    (Some(FunctorAtom::Twist(t)), FunctorAtom::Twist(u)) => {
                        *t = class_add(t, &u);
                        changed = true;
                    }
                    (_, FunctorAtom::Twist(u)) if class_is_zero(&u) => {
                        changed = true;
                    }
                    (_, a) => merged.push(a),
                }
            }
            atoms = merged;
            // cancel adjacent inverse mutations
            let mut i = 0;
            while i + 1 < atoms.len() {
                let cancel = matches!(
                    (&atoms[i], &atoms[i + 1]),
                    (FunctorAtom::LeftMut(a), FunctorAtom::RightMut(b)) if a == b
                ) || matches!(
                    (&atoms[i], &atoms[i + 1]),
                    (FunctorAtom::RightMut(a), FunctorAtom::LeftMut(b)) if a == b
                );
                if cancel {
                    atoms.drain(i..i + 2);
                    changed = true;
                    i = i.saturating_sub(1);
                } else {
                    i += 1;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(FunctorExpr(atoms))
    }

    /// Normal form of a component for membership equality (outer shifts do
    /// not matter: a component equals its shift).
    pub fn membership_form(&self, term: &ComponentTerm) -> Result<ComponentTerm, SodError> {
        Ok(match term {
            ComponentTerm::Exceptional(obj) => {
                let (core, _) = self.normalize_object(obj);
                ComponentTerm::Exceptional(core)
            }
            ComponentTerm::Abstract { base, functor } => ComponentTerm::Abstract {
                base: base.clone(),
                functor: self.normalize_functor(functor)?,
            },
            ComponentTerm::Pending(p) => {
                let (through, _) = self.normalize_object(&p.through);
                ComponentTerm::Pending(PendingMutation {
                    dir: p.dir,
                    through,
                    of: Box::new(self.membership_form(&p.of)?),
                })
            }
        })
    }

    /// Human-readable rendering for traces.
    pub fn render_object(&self, obj: &ObjectExpr) -> String {
        match obj {
            ObjectExpr::Line(c) => self.render_line(c),
            ObjectExpr::Pushforward { map, sub, twist } => {
                if class_is_zero(twist) {
                    format!("{map}_*O_{sub}")
                } else {
                    let line = self.render_line(twist);
                    format!("{map}_*O_{sub}{}", line.trim_start_matches('O'))
                }
            }
            ObjectExpr::Shift(inner, n) => format!("{}[{n}]", self.render_object(inner)),
            ObjectExpr::Opaque(s) => s.clone(),
        }
    }

    fn render_line(&self, c: &[i64]) -> String {
        if class_is_zero(c) {
            return "O".to_string();
        }
        let mut out = String::new();
        for (coef, label) in c.iter().zip(&self.basis) {
            if *coef == 0 {
                continue;
            }
            if !out.is_empty() && *coef > 0 {
                out.push('+');
            }
            match coef {
                1 => {}
                -1 => out.push('-'),
                v => out.push_str(&v.to_string()),
            }
            out.push_str(label);
        }
        format!("O({out})")
    }

    pub fn render_component(&self, term: &ComponentTerm) -> String {
        match term {
            ComponentTerm::Exceptional(obj) => self.render_object(obj),
            ComponentTerm::Abstract { base, functor } => {
                let atoms: Vec<String> = functor
                    .0
                    .iter()
                    .map(|a| match a {
                        FunctorAtom::LeftMut(o) => format!("L[{}]", self.render_object(o)),
                        FunctorAtom::RightMut(o) => format!("R[{}]", self.render_object(o)),
                        FunctorAtom::Twist(c) => format!("T[{}]", self.render_line(c)),
                        FunctorAtom::Named(n) => n.clone(),
                    })
                    .collect();
                format!("{}({base})", atoms.join("∘"))
            }
            ComponentTerm::Pending(p) => {
                let tag = match p.dir {
                    MutDir::Left => "L",
                    MutDir::Right => "R",
                };
                format!(
                    "{tag}[{}]({})",
                    self.render_object(&p.through),
                    self.render_component(&p.of)
                )
            }
        }
    }

    pub fn render_sod(&self, sod: &Sod) -> String {
        let parts: Vec<String> =
            sod.components.iter().map(|c| self.render_component(c)).collect();
        format!("⟨{}⟩", parts.join(", "))
    }

    /// Componentwise equality after normalization.
    pub fn sod_equal(&self, a: &Sod, b: &Sod) -> Result<bool, SodError> {
        if a.ambient != b.ambient || a.len() != b.len() {
            return Ok(false);
        }
        for (x, y) in a.components.iter().zip(&b.components) {
            if self.membership_form(x)? != self.membership_form(y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
