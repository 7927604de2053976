//! Finite table-presented categories: parsing, validation, Cauchy completion
//! and slices.
//!
//! One representation serves every provider in the workbench. Objects and
//! arrows are dense indices; arrows carry a payload that lets generated
//! families (functions between finite sets, equivariant maps of free G-sets)
//! compose algorithmically instead of through a stored table. Objects and
//! arrows are ordered canonically — declaration order for files, generation
//! grading for providers — and every search downstream relies on that order
//! for its minimal-witness contract.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Object index into a [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Obj(pub usize);

/// Arrow index into a [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arr(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectData {
    pub id: String,
    pub grade: u32,
}

/// Provider-specific arrow payload. `Table` arrows compose through the
/// explicit composition map; `Map` arrows carry element images and compose
/// pointwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Table,
    /// Images of the domain's elements (finite sets) or of the domain's
    /// orbit generators (free G-sets), as element indices of the codomain.
    Map(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowData {
    pub id: String,
    pub src: Obj,
    pub dst: Obj,
    pub payload: Payload,
}

/// How non-identity composites are computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompRule {
    /// Explicit table on non-identity composable pairs.
    Table(BTreeMap<(Arr, Arr), Arr>),
    /// At most one arrow per ordered pair of objects.
    Thin,
    /// `Map` payloads over finite sets: `sizes[o]` is the carrier size.
    FinSet { sizes: Vec<u32> },
    /// `Map` payloads over free G-sets: `orbits[o]` counts orbits, elements
    /// are indexed `orbit * |G| + group element`.
    FreeG { group: Group, orbits: Vec<u32> },
}

/// Which analytic limit formulas the provider supplies. Analytic candidates
/// are never trusted: the weak-limit machinery re-certifies them by bounded
/// cone-factorization checks before use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analytic {
    None,
    FinSet,
    FreeG,
}

/// A finite computable category: the one handle type used by every search.
#[derive(Debug, Clone)]
pub struct FinCategory {
    pub name: String,
    objects: Vec<ObjectData>,
    arrows: Vec<ArrowData>,
    identities: Vec<Arr>,
    /// `homs[src][dst]` in canonical order.
    homs: Vec<Vec<Vec<Arr>>>,
    arrow_lookup: HashMap<(Obj, Obj, Payload), Arr>,
    comp: CompRule,
    exhaustive: bool,
    analytic: Analytic,
}

/// Guard against accidentally materialising a family too large to search.
pub const MAX_ARROWS: usize = 120_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("arrow `{id}` endpoints out of range")]
    BadEndpoints { id: String },
    #[error("duplicate arrow id `{id}`")]
    DuplicateArrow { id: String },
    #[error("duplicate object id `{id}`")]
    DuplicateObject { id: String },
    #[error("category would have {n} arrows, exceeding the {max} limit")]
    TooLarge { n: usize, max: usize },
    #[error("{0}")]
    Invalid(String),
}

impl FinCategory {
    /// Assemble a category from raw parts. Identities are synthesised, one
    /// per object, and placed before the supplied arrows.
    pub fn assemble(
        name: String,
        objects: Vec<ObjectData>,
        mut declared: Vec<ArrowData>,
        comp: CompRule,
        exhaustive: bool,
        analytic: Analytic,
    ) -> Result<FinCategory, BuildError> {
        let n_obj = objects.len();
        let mut seen = std::collections::HashSet::new();
        for o in &objects {
            if !seen.insert(o.id.clone()) {
                return Err(BuildError::DuplicateObject { id: o.id.clone() });
            }
        }
        let mut arrows = Vec::with_capacity(n_obj + declared.len());
        let mut identities = Vec::with_capacity(n_obj);
        for (i, o) in objects.iter().enumerate() {
            let payload = match &comp {
                CompRule::FinSet { sizes } => Payload::Map((0..sizes[i]).collect()),
                CompRule::FreeG { group, orbits } => Payload::Map(
                    (0..orbits[i])
                        .map(|k| k * group.order() as u32 + group.unit)
                        .collect(),
                ),
                _ => Payload::Table,
            };
            identities.push(Arr(arrows.len()));
            arrows.push(ArrowData {
                id: format!("id_{}", o.id),
                src: Obj(i),
                dst: Obj(i),
                payload,
            });
        }
        arrows.append(&mut declared);
        if arrows.len() > MAX_ARROWS {
            return Err(BuildError::TooLarge {
                n: arrows.len(),
                max: MAX_ARROWS,
            });
        }
        let mut arrow_ids = std::collections::HashSet::new();
        for a in &arrows {
            if a.src.0 >= n_obj || a.dst.0 >= n_obj {
                return Err(BuildError::BadEndpoints { id: a.id.clone() });
            }
            if !arrow_ids.insert(a.id.clone()) {
                return Err(BuildError::DuplicateArrow { id: a.id.clone() });
            }
        }
        let mut homs = vec![vec![Vec::new(); n_obj]; n_obj];
        let mut arrow_lookup = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            homs[a.src.0][a.dst.0].push(Arr(i));
            arrow_lookup.insert((a.src, a.dst, a.payload.clone()), Arr(i));
        }
        Ok(FinCategory {
            name,
            objects,
            arrows,
            identities,
            homs,
            arrow_lookup,
            comp,
            exhaustive,
            analytic,
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn object_data(&self, o: Obj) -> &ObjectData {
        &self.objects[o.0]
    }

    pub fn object_by_id(&self, id: &str) -> Option<Obj> {
        self.objects.iter().position(|o| o.id == id).map(Obj)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arr> + '_ {
        (0..self.arrows.len()).map(Arr)
    }

    pub fn arrow_data(&self, a: Arr) -> &ArrowData {
        &self.arrows[a.0]
    }

    pub fn arrow_by_id(&self, id: &str) -> Option<Arr> {
        self.arrows.iter().position(|a| a.id == id).map(Arr)
    }

    pub fn src(&self, a: Arr) -> Obj {
        self.arrows[a.0].src
    }

    pub fn dst(&self, a: Arr) -> Obj {
        self.arrows[a.0].dst
    }

    pub fn id(&self, o: Obj) -> Arr {
        self.identities[o.0]
    }

    pub fn is_identity(&self, a: Arr) -> bool {
        self.identities[self.arrows[a.0].src.0] == a
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Arr] {
        &self.homs[x.0][y.0]
    }

    pub fn exhaustive(&self) -> bool {
        self.exhaustive
    }

    pub fn analytic(&self) -> Analytic {
        self.analytic
    }

    pub fn comp_rule(&self) -> &CompRule {
        &self.comp
    }

    pub fn lookup_map_arrow(&self, src: Obj, dst: Obj, images: Vec<u32>) -> Option<Arr> {
        self.arrow_lookup.get(&(src, dst, Payload::Map(images))).copied()
    }

    /// Composite `g ∘ f` (g after f). Panics if the pair is not composable
    /// or the table is missing the entry; run [`validate_category`] first on
    /// untrusted tables.
    pub fn compose(&self, g: Arr, f: Arr) -> Arr {
        debug_assert_eq!(self.dst(f), self.src(g), "non-composable pair");
        if self.is_identity(g) {
            return f;
        }
        if self.is_identity(f) {
            return g;
        }
        match &self.comp {
            CompRule::Table(map) => *map
                .get(&(g, f))
                .unwrap_or_else(|| panic!("composition table missing ({}, {})", g.0, f.0)),
            CompRule::Thin => self.homs[self.src(f).0][self.dst(g).0][0],
            CompRule::FinSet { .. } => {
                let fi = self.map_images(f);
                let gi = self.map_images(g);
                let images: Vec<u32> = fi.iter().map(|&x| gi[x as usize]).collect();
                self.arrow_lookup[&(self.src(f), self.dst(g), Payload::Map(images))]
            }
            CompRule::FreeG { group, .. } => {
                let fi = self.map_images(f);
                let images: Vec<u32> = fi
                    .iter()
                    .map(|&x| self.apply_gmap(group, g, x))
                    .collect();
                self.arrow_lookup[&(self.src(f), self.dst(g), Payload::Map(images))]
            }
        }
    }

    /// Checked composite: `None` when the table lacks the entry (candidate
    /// tables under validation).
    pub fn try_compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        if self.dst(f) != self.src(g) {
            return None;
        }
        if self.is_identity(g) {
            return Some(f);
        }
        if self.is_identity(f) {
            return Some(g);
        }
        match &self.comp {
            CompRule::Table(map) => map.get(&(g, f)).copied(),
            _ => Some(self.compose(g, f)),
        }
    }

    fn map_images(&self, a: Arr) -> &[u32] {
        match &self.arrows[a.0].payload {
            Payload::Map(v) => v,
            Payload::Table => panic!("arrow {} has no map payload", a.0),
        }
    }

    /// Apply an equivariant map to element `x = orbit * |G| + h`.
    fn apply_gmap(&self, group: &Group, a: Arr, x: u32) -> u32 {
        let n = group.order() as u32;
        let (orbit, h) = (x / n, x % n);
        let images = self.map_images(a);
        let target = images[orbit as usize];
        let (torb, th) = (target / n, target % n);
        torb * n + group.mul(h, th)
    }

    /// Number of carrier elements of an object, for map-payload providers.
    pub fn carrier_size(&self, o: Obj) -> Option<u32> {
        match &self.comp {
            CompRule::FinSet { sizes } => Some(sizes[o.0]),
            CompRule::FreeG { group, orbits } => Some(orbits[o.0] * group.order() as u32),
            _ => None,
        }
    }

    /// Lexicographically minimal weak-terminal object candidate supplied by
    /// the analytic provider, if any. Certified by the caller.
    pub fn analytic_weak_terminal(&self) -> Option<Obj> {
        match self.analytic {
            Analytic::FinSet | Analytic::FreeG => {
                self.objects().find(|&o| self.carrier_size(o).unwrap_or(0) > 0)
            }
            Analytic::None => None,
        }
    }

    /// Analytic binary product candidate `(apex, p, q)`, when the family
    /// provides one within its cap.
    pub fn analytic_product(&self, x: Obj, y: Obj) -> Option<(Obj, Arr, Arr)> {
        match &self.comp {
            CompRule::FinSet { sizes } => {
                let (sx, sy) = (sizes[x.0], sizes[y.0]);
                let size = sx.checked_mul(sy)?;
                let apex = self.objects().find(|&o| sizes[o.0] == size)?;
                // element k of the product is the pair (k / sy, k % sy)
                let p = if sy == 0 {
                    self.lookup_map_arrow(apex, x, Vec::new())?
                } else {
                    self.lookup_map_arrow(apex, x, (0..size).map(|k| k / sy).collect())?
                };
                let q = if sy == 0 {
                    self.lookup_map_arrow(apex, y, Vec::new())?
                } else {
                    self.lookup_map_arrow(apex, y, (0..size).map(|k| k % sy).collect())?
                };
                Some((apex, p, q))
            }
            CompRule::FreeG { group, orbits } => {
                let n = group.order() as u32;
                let (ox, oy) = (orbits[x.0], orbits[y.0]);
                let prod_orbits = ox.checked_mul(oy)?.checked_mul(n)?;
                let apex = self.objects().find(|&o| orbits[o.0] == prod_orbits)?;
                // generator (i, j, h) of the product maps to (i, e) in x and
                // (j, h) in y; generators are indexed (i * oy + j) * n + h.
                let mut p_imgs = Vec::with_capacity(prod_orbits as usize);
                let mut q_imgs = Vec::with_capacity(prod_orbits as usize);
                for i in 0..ox {
                    for j in 0..oy {
                        for h in 0..n {
                            p_imgs.push(i * n + group.unit);
                            q_imgs.push(j * n + h);
                        }
                    }
                }
                let p = self.lookup_map_arrow(apex, x, p_imgs)?;
                let q = self.lookup_map_arrow(apex, y, q_imgs)?;
                Some((apex, p, q))
            }
            _ => None,
        }
    }

    /// Analytic equalizer candidate `(object, inclusion)` of `f, g : x ⇉ y`.
    pub fn analytic_equalizer(&self, f: Arr, g: Arr) -> Option<(Obj, Arr)> {
        if self.src(f) != self.src(g) || self.dst(f) != self.dst(g) {
            return None;
        }
        let x = self.src(f);
        match &self.comp {
            CompRule::FinSet { sizes } => {
                let fi = self.map_images(f);
                let gi = self.map_images(g);
                let agree: Vec<u32> = (0..sizes[x.0]).filter(|&e| fi[e as usize] == gi[e as usize]).collect();
                let obj = self.objects().find(|&o| sizes[o.0] == agree.len() as u32)?;
                let inc = self.lookup_map_arrow(obj, x, agree)?;
                Some((obj, inc))
            }
            CompRule::FreeG { group, orbits } => {
                let n = group.order() as u32;
                let fi = self.map_images(f);
                let gi = self.map_images(g);
                // equivariant maps agree on an orbit iff they agree on its
                // generator; the equalizer is the free sub-G-set on those.
                let agree: Vec<u32> = (0..orbits[x.0])
                    .filter(|&k| fi[k as usize] == gi[k as usize])
                    .map(|k| k * n + group.unit)
                    .collect();
                let obj = self.objects().find(|&o| orbits[o.0] == agree.len() as u32)?;
                let inc = self.lookup_map_arrow(obj, x, agree)?;
                Some((obj, inc))
            }
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One violated categorical law, with the offending data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LawViolation {
    /// No entry for a composable non-identity pair `(g, f)`.
    MissingComposite { g: String, f: String },
    /// Table entry has wrong endpoints.
    BadComposite { g: String, f: String, result: String },
    /// `h∘(g∘f) ≠ (h∘g)∘f` for the named triple.
    Associativity { h: String, g: String, f: String },
    /// Identity is not neutral on the named arrow.
    Identity { arrow: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<LawViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok: all categorical laws hold");
        }
        for v in &self.violations {
            match v {
                LawViolation::MissingComposite { g, f: ff } => {
                    writeln!(f, "totality: no composite for {g} . {ff}")?
                }
                LawViolation::BadComposite { g, f: ff, result } => {
                    writeln!(f, "closure: {g} . {ff} = {result} has wrong endpoints")?
                }
                LawViolation::Associativity { h, g, f: ff } => {
                    writeln!(f, "associativity fails on {h} . {g} . {ff}")?
                }
                LawViolation::Identity { arrow } => {
                    writeln!(f, "identity not neutral on {arrow}")?
                }
            }
        }
        Ok(())
    }
}

/// Check totality, closure, associativity and identity neutrality on every
/// composable tuple. Returns a report rather than failing, so fuzzed inputs
/// can be triaged.
pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut violations = Vec::new();
    let aid = |a: Arr| c.arrow_data(a).id.clone();
    // totality and closure
    for g in c.arrows() {
        for f in c.arrows() {
            if c.dst(f) != c.src(g) {
                continue;
            }
            match c.try_compose(g, f) {
                None => violations.push(LawViolation::MissingComposite {
                    g: aid(g),
                    f: aid(f),
                }),
                Some(r) => {
                    if c.src(r) != c.src(f) || c.dst(r) != c.dst(g) {
                        violations.push(LawViolation::BadComposite {
                            g: aid(g),
                            f: aid(f),
                            result: aid(r),
                        });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    // identities
    for f in c.arrows() {
        let l = c.compose(c.id(c.dst(f)), f);
        let r = c.compose(f, c.id(c.src(f)));
        if l != f || r != f {
            violations.push(LawViolation::Identity { arrow: aid(f) });
        }
    }
    // associativity
    for f in c.arrows() {
        for g in c.arrows() {
            if c.src(g) != c.dst(f) {
                continue;
            }
            let gf = c.compose(g, f);
            for h in c.arrows() {
                if c.src(h) != c.dst(g) {
                    continue;
                }
                let hg = c.compose(h, g);
                if c.compose(h, gf) != c.compose(hg, f) {
                    violations.push(LawViolation::Associativity {
                        h: aid(h),
                        g: aid(g),
                        f: aid(f),
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

// ---------------------------------------------------------------------------
// Category spec grammar
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}: duplicate id `{id}`")]
    Duplicate { line: usize, id: String },
    #[error("{line}: unknown reference `{id}`")]
    Unknown { line: usize, id: String },
}

fn ident(tok: &str, line: usize, col: usize) -> Result<&str, ParseError> {
    let ok = !tok.is_empty()
        && tok
            .chars()
            .all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-');
    if ok {
        Ok(tok)
    } else {
        Err(ParseError::Syntax {
            line,
            col,
            msg: format!("expected identifier, got `{tok}`"),
        })
    }
}

/// Parse the line-oriented category spec grammar:
///
/// ```text
/// category NAME
/// object ID
/// arrow ID : SRC -> DST
/// compose G . F = H        # G after F
/// ```
///
/// Identities are implicit; compose entries naming them are rejected. The
/// parse is structurally faithful and preserves declaration order; totality
/// and the categorical laws are checked by [`validate_category`], not here.
pub fn parse_spec(text: &str) -> Result<FinCategory, ParseError> {
    let mut name = String::from("unnamed");
    let mut objects: Vec<ObjectData> = Vec::new();
    let mut arrows: Vec<(String, String, String, usize)> = Vec::new();
    let mut composes: Vec<(String, String, String, usize)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let stripped = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks: Vec<&str> = stripped.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col = raw.find(toks[0]).map(|i| i + 1).unwrap_or(1);
        match toks[0] {
            "category" => {
                if toks.len() != 2 {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: "expected `category NAME`".into(),
                    });
                }
                name = ident(toks[1], line, col)?.to_string();
            }
            "object" => {
                if toks.len() != 2 {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: "expected `object ID`".into(),
                    });
                }
                let id = ident(toks[1], line, col)?.to_string();
                if objects.iter().any(|o| o.id == id) {
                    return Err(ParseError::Duplicate { line, id });
                }
                objects.push(ObjectData { id, grade: 0 });
            }
            "arrow" => {
                // arrow ID : SRC -> DST
                if toks.len() != 6 || toks[2] != ":" || toks[4] != "->" {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: "expected `arrow ID : SRC -> DST`".into(),
                    });
                }
                let id = ident(toks[1], line, col)?.to_string();
                if arrows.iter().any(|a| a.0 == id) {
                    return Err(ParseError::Duplicate { line, id });
                }
                arrows.push((id, toks[3].to_string(), toks[5].to_string(), line));
            }
            "compose" => {
                // compose G . F = H
                if toks.len() != 6 || toks[2] != "." || toks[4] != "=" {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: "expected `compose G . F = H`".into(),
                    });
                }
                composes.push((toks[1].to_string(), toks[3].to_string(), toks[5].to_string(), line));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    let obj_ix = |id: &str, line: usize| -> Result<Obj, ParseError> {
        objects
            .iter()
            .position(|o| o.id == id)
            .map(Obj)
            .ok_or_else(|| ParseError::Unknown {
                line,
                id: id.to_string(),
            })
    };

    let mut arrow_data = Vec::new();
    for (id, s, d, line) in &arrows {
        arrow_data.push(ArrowData {
            id: id.clone(),
            src: obj_ix(s, *line)?,
            dst: obj_ix(d, *line)?,
            payload: Payload::Table,
        });
    }

    // identities occupy indices 0..objects.len() after assembly and are
    // addressable as `id_OBJ`; composable pairs themselves must be
    // non-identity (identity composites are implicit).
    let arr_ix = |id: &str, line: usize| -> Result<Arr, ParseError> {
        if let Some(i) = arrows.iter().position(|a| a.0 == id) {
            return Ok(Arr(objects.len() + i));
        }
        if let Some(obj) = id.strip_prefix("id_") {
            if let Some(i) = objects.iter().position(|o| o.id == obj) {
                return Ok(Arr(i));
            }
        }
        Err(ParseError::Unknown {
            line,
            id: id.to_string(),
        })
    };

    let mut table = BTreeMap::new();
    for (g, f, h, line) in &composes {
        let g = arr_ix(g, *line)?;
        let f = arr_ix(f, *line)?;
        if g.0 < objects.len() || f.0 < objects.len() {
            return Err(ParseError::Syntax {
                line: *line,
                col: 1,
                msg: "identity compositions are implicit; list only non-identity pairs".into(),
            });
        }
        let h = arr_ix(h, *line)?;
        table.insert((g, f), h);
    }

    FinCategory::assemble(name, objects, arrow_data, CompRule::Table(table), true, Analytic::None)
        .map_err(|e| ParseError::Syntax {
            line: 0,
            col: 0,
            msg: e.to_string(),
        })
}

/// Canonical writer: `parse → serialize → parse` is the identity.
pub fn serialize_spec(c: &FinCategory) -> String {
    let mut out = String::new();
    out.push_str(&format!("category {}\n", c.name));
    for o in c.objects() {
        out.push_str(&format!("object {}\n", c.object_data(o).id));
    }
    for a in c.arrows() {
        if c.is_identity(a) {
            continue;
        }
        let d = c.arrow_data(a);
        out.push_str(&format!(
            "arrow {} : {} -> {}\n",
            d.id,
            c.object_data(d.src).id,
            c.object_data(d.dst).id
        ));
    }
    if let CompRule::Table(map) = c.comp_rule() {
        for ((g, f), h) in map {
            out.push_str(&format!(
                "compose {} . {} = {}\n",
                c.arrow_data(*g).id,
                c.arrow_data(*f).id,
                c.arrow_data(*h).id
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Functors
// ---------------------------------------------------------------------------

/// Object and arrow maps of a functor between two handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorData {
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arr>,
}

impl FunctorData {
    /// Exhaustively check functoriality: endpoints, identities, composites.
    pub fn check(&self, src: &FinCategory, dst: &FinCategory) -> Result<(), String> {
        if self.obj_map.len() != src.object_count() || self.arr_map.len() != src.arrow_count() {
            return Err("functor data has wrong arity".into());
        }
        for a in src.arrows() {
            let fa = self.arr_map[a.0];
            if dst.src(fa) != self.obj_map[src.src(a).0] || dst.dst(fa) != self.obj_map[src.dst(a).0]
            {
                return Err(format!("functor breaks endpoints on arrow {}", a.0));
            }
        }
        for o in src.objects() {
            if self.arr_map[src.id(o).0] != dst.id(self.obj_map[o.0]) {
                return Err(format!("functor breaks identity on object {}", o.0));
            }
        }
        for f in src.arrows() {
            for g in src.arrows() {
                if src.dst(f) != src.src(g) {
                    continue;
                }
                let lhs = self.arr_map[src.compose(g, f).0];
                let rhs = dst.compose(self.arr_map[g.0], self.arr_map[f.0]);
                if lhs != rhs {
                    return Err(format!("functor breaks composition on ({}, {})", g.0, f.0));
                }
            }
        }
        Ok(())
    }

    /// Fullness and faithfulness of the functor, checked hom-set by hom-set.
    pub fn check_fully_faithful(&self, src: &FinCategory, dst: &FinCategory) -> Result<(), String> {
        for x in src.objects() {
            for y in src.objects() {
                let mut images: Vec<Arr> = src
                    .hom(x, y)
                    .iter()
                    .map(|a| self.arr_map[a.0])
                    .collect();
                images.sort();
                let before = images.len();
                images.dedup();
                if images.len() != before {
                    return Err(format!("not faithful on hom({}, {})", x.0, y.0));
                }
                let target = dst.hom(self.obj_map[x.0], self.obj_map[y.0]);
                if images.len() != target.len() {
                    return Err(format!("not full on hom({}, {})", x.0, y.0));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Cauchy completion
// ---------------------------------------------------------------------------

/// Split every idempotent. Objects of the result are the idempotents of `c`;
/// an arrow `e → f` is an arrow `a` of `c` with `f∘a∘e = a`. The canonical
/// embedding sends `x` to `id_x`.
pub fn cauchy_completion(c: &FinCategory) -> Result<(FinCategory, FunctorData), BuildError> {
    let mut idems: Vec<Arr> = Vec::new();
    for a in c.arrows() {
        if c.src(a) == c.dst(a) && c.compose(a, a) == a {
            idems.push(a);
        }
    }
    let objects: Vec<ObjectData> = idems
        .iter()
        .map(|&e| ObjectData {
            id: format!("split_{}", c.arrow_data(e).id),
            grade: c.object_data(c.src(e)).grade,
        })
        .collect();
    // arrows e → f: a with f∘a∘e = a; identity of e is e itself, so skip
    // the canonical representative (a = e with e → e) which assemble()
    // synthesises as the identity.
    let mut declared = Vec::new();
    let mut key_of: HashMap<(usize, usize, Arr), Arr> = HashMap::new();
    let mut next = idems.len();
    for (i, &e) in idems.iter().enumerate() {
        for (j, &f) in idems.iter().enumerate() {
            for &a in c.hom(c.src(e), c.src(f)) {
                if c.compose(f, c.compose(a, e)) != a {
                    continue;
                }
                if i == j && a == e {
                    key_of.insert((i, j, a), Arr(i));
                    continue; // the identity of the split object
                }
                key_of.insert((i, j, a), Arr(next));
                next += 1;
                declared.push(ArrowData {
                    id: format!("c{}_{}_{}", i, j, c.arrow_data(a).id),
                    src: Obj(i),
                    dst: Obj(j),
                    payload: Payload::Table,
                });
            }
        }
    }
    // composition inherited from c
    let mut table = BTreeMap::new();
    let entries: Vec<((usize, usize, Arr), Arr)> =
        key_of.iter().map(|(&k, &v)| (k, v)).collect();
    for &((i, j, a), fa) in &entries {
        for &((j2, k, b), fb) in &entries {
            if j2 != j {
                continue;
            }
            if fa.0 < idems.len() || fb.0 < idems.len() {
                continue; // identity composites are implicit
            }
            let ba = c.compose(b, a);
            let target = key_of[&(i, k, ba)];
            table.insert((fb, fa), target);
        }
    }
    let completion = FinCategory::assemble(
        format!("{}_cauchy", c.name),
        objects,
        declared,
        CompRule::Table(table),
        c.exhaustive(),
        Analytic::None,
    )?;
    let obj_map: Vec<Obj> = c
        .objects()
        .map(|o| Obj(idems.iter().position(|&e| e == c.id(o)).unwrap()))
        .collect();
    let arr_map: Vec<Arr> = c
        .arrows()
        .map(|a| {
            let i = obj_map[c.src(a).0].0;
            let j = obj_map[c.dst(a).0].0;
            key_of[&(i, j, a)]
        })
        .collect();
    Ok((completion, FunctorData { obj_map, arr_map }))
}

// ---------------------------------------------------------------------------
// Slice categories
// ---------------------------------------------------------------------------

/// Slice `c / u`: objects are arrows into `u`, arrows are commuting
/// triangles. Returns the projection functor (slice → c) as arrow/object
/// maps indexed by the slice.
pub fn slice_category(c: &FinCategory, u: Obj) -> Result<(FinCategory, FunctorData), BuildError> {
    let mut slice_objs: Vec<Arr> = Vec::new();
    for x in c.objects() {
        for &a in c.hom(x, u) {
            slice_objs.push(a);
        }
    }
    let objects: Vec<ObjectData> = slice_objs
        .iter()
        .map(|&a| ObjectData {
            id: format!("o_{}", c.arrow_data(a).id),
            grade: c.object_data(c.src(a)).grade,
        })
        .collect();
    let mut declared = Vec::new();
    let mut key_of: HashMap<(usize, usize, Arr), Arr> = HashMap::new();
    let mut next = slice_objs.len();
    for (i, &a) in slice_objs.iter().enumerate() {
        for (j, &b) in slice_objs.iter().enumerate() {
            for &g in c.hom(c.src(a), c.src(b)) {
                if c.compose(b, g) != a {
                    continue;
                }
                if i == j && c.is_identity(g) {
                    key_of.insert((i, j, g), Arr(i));
                    continue;
                }
                key_of.insert((i, j, g), Arr(next));
                next += 1;
                declared.push(ArrowData {
                    id: format!("t{}_{}_{}", i, j, c.arrow_data(g).id),
                    src: Obj(i),
                    dst: Obj(j),
                    payload: Payload::Table,
                });
            }
        }
    }
    let mut table = BTreeMap::new();
    let entries: Vec<((usize, usize, Arr), Arr)> =
        key_of.iter().map(|(&k, &v)| (k, v)).collect();
    for &((i, j, g), fg) in &entries {
        for &((j2, k, h), fh) in &entries {
            if j2 != j || fg.0 < slice_objs.len() || fh.0 < slice_objs.len() {
                continue;
            }
            let hg = c.compose(h, g);
            table.insert((fh, fg), key_of[&(i, k, hg)]);
        }
    }
    let slice = FinCategory::assemble(
        format!("{}_slice_{}", c.name, c.object_data(u).id),
        objects,
        declared,
        CompRule::Table(table),
        c.exhaustive(),
        Analytic::None,
    )?;
    // projection functor: slice object (a : X → u) ↦ X, slice arrow ↦ g
    let obj_map: Vec<Obj> = slice_objs.iter().map(|&a| c.src(a)).collect();
    let mut arr_map = vec![Arr(0); slice.arrow_count()];
    for (&(i, _, g), &fa) in &key_of {
        let _ = i;
        arr_map[fa.0] = g;
    }
    Ok((slice, FunctorData { obj_map, arr_map }))
}

// ---------------------------------------------------------------------------
// Finite groups (for the free G-set provider)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub name: String,
    pub elems: Vec<String>,
    /// `mul[a][b] = a * b`
    pub table: Vec<Vec<u32>>,
    pub unit: u32,
}

impl Group {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    /// The cyclic group of order two.
    pub fn z2() -> Group {
        Group {
            name: "z2".into(),
            elems: vec!["e".into(), "a".into()],
            table: vec![vec![0, 1], vec![1, 0]],
            unit: 0,
        }
    }

    /// Group laws: totality is structural; checks unit, associativity and
    /// inverses.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.elems.len() as u32;
        if self.table.len() != n as usize || self.table.iter().any(|r| r.len() != n as usize) {
            return Err("multiplication table has wrong shape".into());
        }
        for row in &self.table {
            if row.iter().any(|&x| x >= n) {
                return Err("multiplication table entry out of range".into());
            }
        }
        for a in 0..n {
            if self.mul(self.unit, a) != a || self.mul(a, self.unit) != a {
                return Err(format!("`{}` is not neutral", self.elems[self.unit as usize]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err("multiplication not associative".into());
                    }
                }
            }
        }
        for a in 0..n {
            if !(0..n).any(|b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit) {
                return Err(format!("element `{}` has no inverse", self.elems[a as usize]));
            }
        }
        Ok(())
    }
}

/// Parse the group spec grammar:
///
/// ```text
/// group NAME
/// elements e,a,...
/// mul a*b = c
/// ```
///
/// The first listed element is the unit. The table must be total and pass
/// [`Group::validate`].
pub fn parse_group(text: &str) -> Result<Group, ParseError> {
    let mut name = String::from("unnamed");
    let mut elems: Vec<String> = Vec::new();
    let mut entries: Vec<(String, String, String, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let stripped = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let toks: Vec<&str> = stripped.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match toks[0] {
            "group" if toks.len() == 2 => name = toks[1].to_string(),
            "elements" if toks.len() >= 2 => {
                let rest = stripped.trim_start_matches("elements").trim();
                for e in rest.split(',') {
                    let e = e.trim();
                    if e.is_empty() {
                        continue;
                    }
                    if elems.iter().any(|x| x == e) {
                        return Err(ParseError::Duplicate {
                            line,
                            id: e.to_string(),
                        });
                    }
                    elems.push(e.to_string());
                }
            }
            "mul" => {
                // mul a*b = c
                if toks.len() != 4 || toks[2] != "=" {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "expected `mul a*b = c`".into(),
                    });
                }
                let parts: Vec<&str> = toks[1].split('*').collect();
                if parts.len() != 2 {
                    return Err(ParseError::Syntax {
                        line,
                        col: 1,
                        msg: "expected `mul a*b = c`".into(),
                    });
                }
                entries.push((
                    parts[0].to_string(),
                    parts[1].to_string(),
                    toks[3].to_string(),
                    line,
                ));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col: 1,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let ix = |id: &str, line: usize| -> Result<u32, ParseError> {
        elems
            .iter()
            .position(|e| e == id)
            .map(|i| i as u32)
            .ok_or_else(|| ParseError::Unknown {
                line,
                id: id.to_string(),
            })
    };
    let n = elems.len();
    let mut table = vec![vec![u32::MAX; n]; n];
    for (a, b, c, line) in &entries {
        table[ix(a, *line)? as usize][ix(b, *line)? as usize] = ix(c, *line)?;
    }
    for (a, row) in table.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            if v == u32::MAX {
                return Err(ParseError::Syntax {
                    line: 0,
                    col: 0,
                    msg: format!("mul table missing {}*{}", elems[a], elems[b]),
                });
            }
        }
    }
    let g = Group {
        name,
        elems,
        table,
        unit: 0,
    };
    g.validate().map_err(|msg| ParseError::Syntax {
        line: 0,
        col: 0,
        msg,
    })?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const ONE: &str = "category one\nobject x\n";

    pub(crate) const CHAIN2: &str = "\
category chain2
object o0
object o1
arrow u : o0 -> o1
";

    #[test]
    fn parse_one_is_terminal() {
        let c = parse_spec(ONE).unwrap();
        assert_eq!(c.object_count(), 1);
        assert_eq!(c.arrow_count(), 1);
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn parse_chain2() {
        let c = parse_spec(CHAIN2).unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.arrow_count(), 3); // two identities plus u
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn unknown_arrow_in_compose_is_a_parse_error() {
        let bad = "category c\nobject x\narrow e : x -> x\ncompose e . ghost = e\n";
        match parse_spec(bad) {
            Err(ParseError::Unknown { id, .. }) => assert_eq!(id, "ghost"),
            other => panic!("expected unknown-reference error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        let bad = "category c\nobject\n";
        match parse_spec(bad) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_object_rejected() {
        let bad = "category c\nobject x\nobject x\n";
        assert!(matches!(parse_spec(bad), Err(ParseError::Duplicate { .. })));
    }

    #[test]
    fn walking_idempotent_validates() {
        let spec = "category idem\nobject x\narrow e : x -> x\ncompose e . e = e\n";
        let c = parse_spec(spec).unwrap();
        assert!(validate_category(&c).is_ok());
    }

    // Declaring e·e = id_x turns the table into the group Z/2, which is a
    // perfectly valid one-object category; the report must stay empty.
    #[test]
    fn idempotent_redeclared_as_involution_is_still_a_category() {
        let spec = "category z2\nobject x\narrow e : x -> x\ncompose e . e = id_x\n";
        let c = parse_spec(spec).unwrap();
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn associativity_violation_listed_with_offending_triple() {
        // e·e = f, e·f = id, f·e = e, f·f = f: (e e) e = f e = e but
        // e (e e) = e f = id.
        let spec = "\
category broken
object x
arrow e : x -> x
arrow f : x -> x
compose e . e = f
compose e . f = id_x
compose f . e = e
compose f . f = f
";
        let c = parse_spec(spec).unwrap();
        let report = validate_category(&c);
        assert!(!report.is_ok());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, LawViolation::Associativity { .. })));
    }

    #[test]
    fn missing_composite_listed() {
        let spec = "category partial\nobject x\nobject y\nobject z\n\
arrow f : x -> y\narrow g : y -> z\n";
        let c = parse_spec(spec).unwrap();
        let report = validate_category(&c);
        assert_eq!(
            report.violations,
            vec![LawViolation::MissingComposite {
                g: "g".into(),
                f: "f".into()
            }]
        );
    }

    #[test]
    fn roundtrip_on_canonical_specs() {
        for spec in [ONE, CHAIN2] {
            let c = parse_spec(spec).unwrap();
            let again = parse_spec(&serialize_spec(&c)).unwrap();
            assert_eq!(c.object_count(), again.object_count());
            assert_eq!(c.arrow_count(), again.arrow_count());
            assert_eq!(serialize_spec(&c), serialize_spec(&again));
        }
    }

    #[test]
    fn cauchy_splits_the_walking_idempotent() {
        let spec = "category idem\nobject x\narrow e : x -> x\ncompose e . e = e\n";
        let c = parse_spec(spec).unwrap();
        let (cc, emb) = cauchy_completion(&c).unwrap();
        assert_eq!(cc.object_count(), 2);
        assert!(validate_category(&cc).is_ok());
        emb.check(&c, &cc).unwrap();
        emb.check_fully_faithful(&c, &cc).unwrap();
    }

    #[test]
    fn cauchy_fixes_preorders_and_one() {
        for spec in [ONE, CHAIN2] {
            let c = parse_spec(spec).unwrap();
            let (cc, emb) = cauchy_completion(&c).unwrap();
            assert_eq!(cc.object_count(), c.object_count());
            assert_eq!(cc.arrow_count(), c.arrow_count());
            emb.check(&c, &cc).unwrap();
        }
    }

    #[test]
    fn slice_of_chain2_at_top_is_chain2() {
        let c = parse_spec(CHAIN2).unwrap();
        let (s, proj) = slice_category(&c, Obj(1)).unwrap();
        assert_eq!(s.object_count(), 2);
        assert_eq!(s.arrow_count(), 3);
        assert!(validate_category(&s).is_ok());
        proj.check(&s, &c).unwrap();
    }

    #[test]
    fn slice_at_unknown_object_guarded_by_caller() {
        let c = parse_spec(ONE).unwrap();
        assert!(c.object_by_id("ghost").is_none());
    }

    #[test]
    fn group_z2_roundtrip() {
        let g = parse_group("group z2\nelements e,a\nmul e*e = e\nmul e*a = a\nmul a*e = a\nmul a*a = e\n").unwrap();
        assert_eq!(g, Group::z2());
    }

    #[test]
    fn invalid_group_rejected() {
        // a*a = a makes `a` idempotent but non-unital: no inverses.
        let r = parse_group("group bad\nelements e,a\nmul e*e = e\nmul e*a = a\nmul a*e = a\nmul a*a = a\n");
        assert!(r.is_err());
    }
}
