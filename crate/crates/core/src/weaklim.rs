//! Weak limits, cone preorders (order reflections), arrows determined by
//! projections, equalities for weak products, and the preserves-projections
//! condition.
//!
//! A weak limit is a cone through which every cone factors, not necessarily
//! uniquely. Searches scan cones in canonical order and return the first
//! weakly terminal one, so witnesses are lexicographically minimal and
//! stable across runs. On capped providers an analytic candidate (when the
//! family supplies one) is certified first; certification is always a
//! cone-factorization check, never trust.

use serde::{Deserialize, Serialize};

use crate::fincat::{Arr, FinCategory, Obj};
use crate::report::{Completeness, Gas, Search, Undecided};

// ---------------------------------------------------------------------------
// Diagrams and cones
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub arrow: Arr,
}

/// A finite diagram: a labelled shape in the handle. Edges impose
/// `arrow ∘ leg_from = leg_to` on cones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub nodes: Vec<Obj>,
    pub edges: Vec<Edge>,
}

impl Diagram {
    pub fn discrete(nodes: Vec<Obj>) -> Diagram {
        Diagram {
            nodes,
            edges: Vec::new(),
        }
    }

    /// Empty diagram: its weak limit is a weak terminal object.
    pub fn empty() -> Diagram {
        Diagram::discrete(Vec::new())
    }

    /// Binary product shape.
    pub fn product(x: Obj, y: Obj) -> Diagram {
        Diagram::discrete(vec![x, y])
    }

    /// Cospan `src f → dst ← src g`: its weak limit is a weak pullback.
    /// Node order: [src f, src g, dst].
    pub fn cospan(cat: &FinCategory, f: Arr, g: Arr) -> Diagram {
        debug_assert_eq!(cat.dst(f), cat.dst(g));
        Diagram {
            nodes: vec![cat.src(f), cat.src(g), cat.dst(f)],
            edges: vec![
                Edge {
                    from: 0,
                    to: 2,
                    arrow: f,
                },
                Edge {
                    from: 1,
                    to: 2,
                    arrow: g,
                },
            ],
        }
    }

    /// Parallel pair `f, g : x ⇉ y`: its weak limit is a weak equalizer.
    pub fn parallel_pair(cat: &FinCategory, f: Arr, g: Arr) -> Diagram {
        debug_assert_eq!(cat.src(f), cat.src(g));
        debug_assert_eq!(cat.dst(f), cat.dst(g));
        Diagram {
            nodes: vec![cat.src(f), cat.dst(f)],
            edges: vec![
                Edge {
                    from: 0,
                    to: 1,
                    arrow: f,
                },
                Edge {
                    from: 0,
                    to: 1,
                    arrow: g,
                },
            ],
        }
    }

    /// Two copies of a cone's apex, each mapping down through the cone's
    /// legs: the shape whose weak limit is an equality for the cone.
    /// Node order: [apex, apex, targets…].
    pub fn equality_shape(cat: &FinCategory, cone: &Cone) -> Diagram {
        let apex = cone.apex;
        let mut nodes = vec![apex, apex];
        let mut edges = Vec::new();
        for (i, &leg) in cone.legs.iter().enumerate() {
            nodes.push(cat.dst(leg));
            edges.push(Edge {
                from: 0,
                to: 2 + i,
                arrow: leg,
            });
            edges.push(Edge {
                from: 1,
                to: 2 + i,
                arrow: leg,
            });
        }
        Diagram { nodes, edges }
    }

    pub fn validate(&self, cat: &FinCategory) -> Result<(), String> {
        for e in &self.edges {
            if e.from >= self.nodes.len() || e.to >= self.nodes.len() {
                return Err("edge endpoint out of range".into());
            }
            if cat.src(e.arrow) != self.nodes[e.from] || cat.dst(e.arrow) != self.nodes[e.to] {
                return Err("edge label endpoints do not match nodes".into());
            }
        }
        Ok(())
    }
}

/// A cone over a diagram: apex plus one leg per node, commuting with every
/// edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub apex: Obj,
    pub legs: Vec<Arr>,
}

impl Cone {
    pub fn commutes(&self, cat: &FinCategory, d: &Diagram) -> bool {
        self.legs.len() == d.nodes.len()
            && self
                .legs
                .iter()
                .zip(&d.nodes)
                .all(|(&l, &n)| cat.src(l) == self.apex && cat.dst(l) == n)
            && d.edges
                .iter()
                .all(|e| cat.compose(e.arrow, self.legs[e.from]) == self.legs[e.to])
    }
}

/// Enumerate every cone over `d` in canonical order (apex index, then legs
/// lexicographically by arrow index). Returns `None` when the gas runs out.
pub fn enumerate_cones(cat: &FinCategory, d: &Diagram, gas: &mut Gas) -> Option<Vec<Cone>> {
    let mut out = Vec::new();
    for apex in cat.objects() {
        if !extend_cones(cat, d, apex, &mut vec![], &mut out, gas) {
            return None;
        }
    }
    Some(out)
}

fn extend_cones(
    cat: &FinCategory,
    d: &Diagram,
    apex: Obj,
    legs: &mut Vec<Arr>,
    out: &mut Vec<Cone>,
    gas: &mut Gas,
) -> bool {
    let j = legs.len();
    if j == d.nodes.len() {
        if !gas.spend(1) {
            return false;
        }
        out.push(Cone {
            apex,
            legs: legs.clone(),
        });
        return true;
    }
    let consistent = |legs: &[Arr], cand: Arr| {
        d.edges.iter().all(|e| {
            if e.to == j && e.from < j {
                cat.compose(e.arrow, legs[e.from]) == cand
            } else if e.from == j && e.to < j {
                cat.compose(e.arrow, cand) == legs[e.to]
            } else if e.from == j && e.to == j {
                cat.compose(e.arrow, cand) == cand
            } else {
                true
            }
        })
    };
    // a leg is forced when an edge arrives from an already-assigned node
    let forced = d
        .edges
        .iter()
        .find(|e| e.to == j && e.from < j)
        .map(|e| cat.compose(e.arrow, legs[e.from]));
    match forced {
        Some(cand) => {
            if !gas.spend(1) {
                return false;
            }
            if consistent(legs, cand) {
                legs.push(cand);
                if !extend_cones(cat, d, apex, legs, out, gas) {
                    return false;
                }
                legs.pop();
            }
            true
        }
        None => {
            for &cand in cat.hom(apex, d.nodes[j]) {
                if !gas.spend(1) {
                    return false;
                }
                if consistent(legs, cand) {
                    legs.push(cand);
                    if !extend_cones(cat, d, apex, legs, out, gas) {
                        return false;
                    }
                    legs.pop();
                }
            }
            true
        }
    }
}

/// First mediating arrow `h` with `to.legs ∘ h = from.legs`. Outer `None`
/// means the gas ran out.
pub fn factor_cone(
    cat: &FinCategory,
    from: &Cone,
    to: &Cone,
    gas: &mut Gas,
) -> Option<Option<Arr>> {
    for &h in cat.hom(from.apex, to.apex) {
        if !gas.spend(1) {
            return None;
        }
        if from
            .legs
            .iter()
            .zip(&to.legs)
            .all(|(&fl, &tl)| cat.compose(tl, h) == fl)
        {
            return Some(Some(h));
        }
    }
    Some(None)
}

// ---------------------------------------------------------------------------
// Weak limits
// ---------------------------------------------------------------------------

/// Evidence that every enumerated cone factors through the witness. The full
/// mediator list is stored in the finite case; larger runs keep the counts
/// only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakLimitCert {
    pub cones_checked: u64,
    /// One mediator per enumerated cone, parallel to the canonical cone
    /// order; omitted past the storage bound.
    pub mediators: Option<Vec<Arr>>,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakLimit {
    pub cone: Cone,
    pub cert: WeakLimitCert,
}

impl WeakLimit {
    /// Re-run the factorization checks recorded in the certificate.
    pub fn reverify(&self, cat: &FinCategory, d: &Diagram) -> bool {
        if !self.cone.commutes(cat, d) {
            return false;
        }
        let mut gas = Gas::new(crate::report::Budget::new(u64::MAX));
        let Some(cones) = enumerate_cones(cat, d, &mut gas) else {
            return false;
        };
        if cones.len() as u64 != self.cert.cones_checked {
            return false;
        }
        match &self.cert.mediators {
            Some(ms) => {
                ms.len() == cones.len()
                    && cones.iter().zip(ms).all(|(c, &m)| {
                        cat.src(m) == c.apex
                            && cat.dst(m) == self.cone.apex
                            && c.legs
                                .iter()
                                .zip(&self.cone.legs)
                                .all(|(&cl, &wl)| cat.compose(wl, m) == cl)
                    })
            }
            None => cones
                .iter()
                .all(|c| matches!(factor_cone(cat, c, &self.cone, &mut gas), Some(Some(_)))),
        }
    }
}

fn certify_weakly_terminal(
    cat: &FinCategory,
    cand: &Cone,
    cones: &[Cone],
    gas: &mut Gas,
) -> Option<Option<Vec<Arr>>> {
    let mut mediators = Vec::with_capacity(cones.len());
    for c in cones {
        match factor_cone(cat, c, cand, gas) {
            None => return None,
            Some(None) => return Some(None),
            Some(Some(h)) => mediators.push(h),
        }
    }
    Some(Some(mediators))
}

/// Search for a weak limit of `d`: the canonical-minimal weakly terminal
/// cone, plus a certificate that every enumerated cone factors through it.
/// `NotFound` only in the exhaustive regime.
pub fn weak_limit(cat: &FinCategory, d: &Diagram, gas: &mut Gas) -> Search<WeakLimit> {
    debug_assert!(d.validate(cat).is_ok());
    let Some(cones) = enumerate_cones(cat, d, gas) else {
        return Search::Undecided(Undecided::budget());
    };
    let completeness = if cat.exhaustive() {
        Completeness::Exhaustive
    } else {
        Completeness::WithinCap
    };
    let finish = |cand: Cone, mediators: Vec<Arr>, n: u64| {
        let store = mediators.len() <= crate::report::CERT_STORE_MAX;
        Search::Found(WeakLimit {
            cone: cand,
            cert: WeakLimitCert {
                cones_checked: n,
                mediators: store.then_some(mediators),
                completeness,
            },
        })
    };
    // analytic candidate first on capped providers: a cheaper route to a
    // witness, certified by the same factorization checks
    if !cat.exhaustive() {
        if let Some(cand) = analytic_candidate(cat, d) {
            debug_assert!(cand.commutes(cat, d));
            match certify_weakly_terminal(cat, &cand, &cones, gas) {
                None => return Search::Undecided(Undecided::budget()),
                Some(Some(meds)) => return finish(cand, meds, cones.len() as u64),
                Some(None) => {}
            }
        }
    }
    for i in 0..cones.len() {
        match certify_weakly_terminal(cat, &cones[i], &cones, gas) {
            None => return Search::Undecided(Undecided::budget()),
            Some(Some(meds)) => {
                let cand = cones[i].clone();
                return finish(cand, meds, cones.len() as u64);
            }
            Some(None) => {}
        }
    }
    if completeness.is_exhaustive() {
        Search::NotFound {
            checked: cones.len() as u64,
        }
    } else {
        Search::Undecided(Undecided::capped("weak limit"))
    }
}

/// Analytic candidate cone for the shapes the providers know how to build:
/// empty (weak terminal), discrete (iterated products), cospans (pullback
/// via product and equalizer) and parallel pairs (equalizer).
fn analytic_candidate(cat: &FinCategory, d: &Diagram) -> Option<Cone> {
    if d.edges.is_empty() {
        match d.nodes.len() {
            0 => {
                let w = cat.analytic_weak_terminal()?;
                return Some(Cone {
                    apex: w,
                    legs: Vec::new(),
                });
            }
            1 => {
                return Some(Cone {
                    apex: d.nodes[0],
                    legs: vec![cat.id(d.nodes[0])],
                })
            }
            _ => {
                // fold analytic binary products left to right
                let (mut apex, p, q) = cat.analytic_product(d.nodes[0], d.nodes[1])?;
                let mut legs = vec![p, q];
                for &n in &d.nodes[2..] {
                    let (apex2, p2, q2) = cat.analytic_product(apex, n)?;
                    apex = apex2;
                    legs = legs.iter().map(|&l| cat.compose(l, p2)).collect();
                    legs.push(q2);
                }
                return Some(Cone { apex, legs });
            }
        }
    }
    // cospan: pullback = equalizer of the two product composites
    if d.nodes.len() == 3
        && d.edges.len() == 2
        && d.edges[0].from == 0
        && d.edges[0].to == 2
        && d.edges[1].from == 1
        && d.edges[1].to == 2
    {
        let (f, g) = (d.edges[0].arrow, d.edges[1].arrow);
        let (_prod, p, q) = cat.analytic_product(d.nodes[0], d.nodes[1])?;
        let (e, inc) = cat.analytic_equalizer(cat.compose(f, p), cat.compose(g, q))?;
        let l0 = cat.compose(p, inc);
        let l1 = cat.compose(q, inc);
        let l2 = cat.compose(f, l0);
        return Some(Cone {
            apex: e,
            legs: vec![l0, l1, l2],
        });
    }
    // parallel pair: equalizer
    if d.nodes.len() == 2
        && d.edges.len() == 2
        && d.edges.iter().all(|e| e.from == 0 && e.to == 1)
    {
        let (f, g) = (d.edges[0].arrow, d.edges[1].arrow);
        let (e, inc) = cat.analytic_equalizer(f, g)?;
        return Some(Cone {
            apex: e,
            legs: vec![inc, cat.compose(f, inc)],
        });
    }
    None
}

/// Weak binary product.
pub fn weak_product(cat: &FinCategory, x: Obj, y: Obj, gas: &mut Gas) -> Search<WeakLimit> {
    weak_limit(cat, &Diagram::product(x, y), gas)
}

/// Weak terminal object.
pub fn weak_terminal(cat: &FinCategory, gas: &mut Gas) -> Search<WeakLimit> {
    weak_limit(cat, &Diagram::empty(), gas)
}

/// Weak pullback of `f` against `g`.
pub fn weak_pullback(cat: &FinCategory, f: Arr, g: Arr, gas: &mut Gas) -> Search<WeakLimit> {
    weak_limit(cat, &Diagram::cospan(cat, f, g), gas)
}

// ---------------------------------------------------------------------------
// Cone preorders and their poset reflections
// ---------------------------------------------------------------------------

/// Cones over a diagram with the factorization preorder and its poset
/// reflection. Over a tuple of projectives the reflection models the
/// subobject lattice of the product in the completion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConePreorder {
    pub cones: Vec<Cone>,
    /// `leq[i][j]`: cone i factors through cone j.
    pub leq: Vec<Vec<bool>>,
    pub class_of: Vec<usize>,
    /// classes in canonical order (by minimal member)
    pub classes: Vec<Vec<usize>>,
    /// `class_leq[a][b]`: class a ≤ class b in the reflection.
    pub class_leq: Vec<Vec<bool>>,
    /// class of weakly terminal cones, when one exists
    pub top_class: Option<usize>,
    pub completeness: Completeness,
}

pub fn cone_preorder(cat: &FinCategory, d: &Diagram, gas: &mut Gas) -> Search<ConePreorder> {
    let Some(cones) = enumerate_cones(cat, d, gas) else {
        return Search::Undecided(Undecided::budget());
    };
    let n = cones.len();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            match factor_cone(cat, &cones[i], &cones[j], gas) {
                None => return Search::Undecided(Undecided::budget()),
                Some(r) => leq[i][j] = r.is_some(),
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = Vec::new();
        for j in i..n {
            if class_of[j] == usize::MAX && leq[i][j] && leq[j][i] {
                class_of[j] = c;
                members.push(j);
            }
        }
        classes.push(members);
    }
    let m = classes.len();
    let mut class_leq = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            class_leq[a][b] = leq[classes[a][0]][classes[b][0]];
        }
    }
    let top_class = (0..m).find(|&b| (0..m).all(|a| class_leq[a][b]));
    let completeness = if cat.exhaustive() {
        Completeness::Exhaustive
    } else {
        Completeness::WithinCap
    };
    Search::Found(ConePreorder {
        cones,
        leq,
        class_of,
        classes,
        class_leq,
        top_class,
        completeness,
    })
}

impl ConePreorder {
    /// Antisymmetry of the reflection.
    pub fn is_poset_reflection(&self) -> bool {
        let m = self.classes.len();
        (0..m).all(|a| (0..m).all(|b| !(self.class_leq[a][b] && self.class_leq[b][a]) || a == b))
    }

    pub fn weakly_terminal_cones(&self) -> Vec<&Cone> {
        match self.top_class {
            Some(t) => self.classes[t].iter().map(|&i| &self.cones[i]).collect(),
            None => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Determined by projections
// ---------------------------------------------------------------------------

/// Verdict of the determined-by-projections check, with a separating pair on
/// failure. Failure witnesses are definite; success is relative to the
/// enumerated data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbpReport {
    pub holds: bool,
    pub witness: Option<(Arr, Arr)>,
    pub pairs_checked: u64,
    pub completeness: Completeness,
}

/// Check whether `f` out of a weak-limit cone coequalises every pair of
/// arrows into the apex that all the legs coequalise.
pub fn determined_by_projections(
    cat: &FinCategory,
    cone: &Cone,
    f: Arr,
    gas: &mut Gas,
) -> Result<DbpReport, Undecided> {
    debug_assert_eq!(cat.src(f), cone.apex);
    let mut pairs_checked = 0u64;
    let completeness = if cat.exhaustive() {
        Completeness::Exhaustive
    } else {
        Completeness::WithinCap
    };
    for t in cat.objects() {
        let homs = cat.hom(t, cone.apex);
        for &h in homs {
            for &k in homs {
                if !gas.spend(1) {
                    return Err(Undecided::budget());
                }
                if h == k {
                    continue;
                }
                let equalized = cone
                    .legs
                    .iter()
                    .all(|&l| cat.compose(l, h) == cat.compose(l, k));
                if !equalized {
                    continue;
                }
                pairs_checked += 1;
                if cat.compose(f, h) != cat.compose(f, k) {
                    return Ok(DbpReport {
                        holds: false,
                        witness: Some((h, k)),
                        pairs_checked,
                        completeness,
                    });
                }
            }
        }
    }
    Ok(DbpReport {
        holds: true,
        witness: None,
        pairs_checked,
        completeness,
    })
}

// ---------------------------------------------------------------------------
// Parallel pairs with pseudo-equivalence witnesses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParallelPair {
    pub x1: Obj,
    pub x0: Obj,
    pub p1: Arr,
    pub p2: Arr,
}

/// Transitivity arrow on the canonical weak pullback of `p2` against `p1`,
/// when that weak pullback exists within the handle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackT {
    pub apex: Obj,
    pub q1: Arr,
    pub q2: Arr,
    pub t: Arr,
}

/// Reflexivity, symmetry and transitivity witnesses for a parallel pair.
/// Transitivity is certified elementwise — every enumerated composable pair
/// of related pairs gets a composite witness by search — so relations whose
/// composable-pair object exceeds a provider's cap still certify. When the
/// canonical weak pullback of the legs does exist, the single arrow `t` on
/// it is stored too.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelWitnesses {
    pub refl: Arr,
    pub sym: Arr,
    pub trans_checked: u64,
    /// Composable-pair witnesses `(a, b, c)` when within storage bounds.
    pub trans_table: Option<Vec<(Arr, Arr, Arr)>>,
    pub pullback_t: Option<PullbackT>,
    pub completeness: Completeness,
}

/// Certify that a parallel pair is a pseudo equivalence relation. Witness
/// failures are definite refutations: hom-sets between enumerated objects
/// are complete even on capped providers.
pub fn certify_parallel_pair(
    cat: &FinCategory,
    pair: ParallelPair,
    gas: &mut Gas,
) -> Search<RelWitnesses> {
    debug_assert_eq!(cat.src(pair.p1), pair.x1);
    debug_assert_eq!(cat.src(pair.p2), pair.x1);
    debug_assert_eq!(cat.dst(pair.p1), pair.x0);
    debug_assert_eq!(cat.dst(pair.p2), pair.x0);
    let completeness = if cat.exhaustive() {
        Completeness::Exhaustive
    } else {
        Completeness::WithinCap
    };
    let id0 = cat.id(pair.x0);
    let mut refl = None;
    for &r in cat.hom(pair.x0, pair.x1) {
        if !gas.spend(1) {
            return Search::Undecided(Undecided::budget());
        }
        if cat.compose(pair.p1, r) == id0 && cat.compose(pair.p2, r) == id0 {
            refl = Some(r);
            break;
        }
    }
    let Some(refl) = refl else {
        return Search::NotFound {
            checked: cat.hom(pair.x0, pair.x1).len() as u64,
        };
    };
    let mut sym = None;
    for &s in cat.hom(pair.x1, pair.x1) {
        if !gas.spend(1) {
            return Search::Undecided(Undecided::budget());
        }
        if cat.compose(pair.p1, s) == pair.p2 && cat.compose(pair.p2, s) == pair.p1 {
            sym = Some(s);
            break;
        }
    }
    let Some(sym) = sym else {
        return Search::NotFound {
            checked: cat.hom(pair.x1, pair.x1).len() as u64,
        };
    };
    let mut trans_checked = 0u64;
    let mut table = Vec::new();
    let mut store = true;
    for t in cat.objects() {
        let homs = cat.hom(t, pair.x1);
        for &a in homs {
            for &b in homs {
                if !gas.spend(1) {
                    return Search::Undecided(Undecided::budget());
                }
                if cat.compose(pair.p2, a) != cat.compose(pair.p1, b) {
                    continue;
                }
                trans_checked += 1;
                let want1 = cat.compose(pair.p1, a);
                let want2 = cat.compose(pair.p2, b);
                let mut found = None;
                for &c in homs {
                    if !gas.spend(1) {
                        return Search::Undecided(Undecided::budget());
                    }
                    if cat.compose(pair.p1, c) == want1 && cat.compose(pair.p2, c) == want2 {
                        found = Some(c);
                        break;
                    }
                }
                match found {
                    Some(c) => {
                        if store {
                            table.push((a, b, c));
                            if table.len() > crate::report::CERT_STORE_MAX {
                                store = false;
                                table.clear();
                            }
                        }
                    }
                    None => {
                        return Search::NotFound {
                            checked: trans_checked,
                        }
                    }
                }
            }
        }
    }
    let pullback_t = match weak_pullback(cat, pair.p2, pair.p1, gas) {
        Search::Found(wl) => {
            let q1 = wl.cone.legs[0];
            let q2 = wl.cone.legs[1];
            let want1 = cat.compose(pair.p1, q1);
            let want2 = cat.compose(pair.p2, q2);
            cat.hom(wl.cone.apex, pair.x1)
                .iter()
                .copied()
                .find(|&t| cat.compose(pair.p1, t) == want1 && cat.compose(pair.p2, t) == want2)
                .map(|t| PullbackT {
                    apex: wl.cone.apex,
                    q1,
                    q2,
                    t,
                })
        }
        _ => None,
    };
    Search::Found(RelWitnesses {
        refl,
        sym,
        trans_checked,
        trans_table: store.then_some(table),
        pullback_t,
        completeness,
    })
}

/// Identity relation on an object.
pub fn identity_pair(cat: &FinCategory, x: Obj) -> ParallelPair {
    ParallelPair {
        x1: x,
        x0: x,
        p1: cat.id(x),
        p2: cat.id(x),
    }
}

// ---------------------------------------------------------------------------
// Equalities for weak products / weak pullbacks
// ---------------------------------------------------------------------------

/// A pseudo equivalence relation on a weak-limit cone's apex whose quotient
/// in the completion is the true limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityRel {
    pub pair: ParallelPair,
    pub wit: RelWitnesses,
    pub limit_cert: WeakLimitCert,
}

/// Compute an equality for a cone: the weak limit of the two-copies diagram
/// over it, packaged with pseudo-equivalence witnesses. The witnesses exist
/// whenever the weak limit does, so their absence panics as an internal
/// soundness failure.
pub fn equality_for_cone(cat: &FinCategory, cone: &Cone, gas: &mut Gas) -> Search<EqualityRel> {
    let d = Diagram::equality_shape(cat, cone);
    match weak_limit(cat, &d, gas) {
        Search::Found(wl) => {
            let pair = ParallelPair {
                x1: wl.cone.apex,
                x0: cone.apex,
                p1: wl.cone.legs[0],
                p2: wl.cone.legs[1],
            };
            match certify_parallel_pair(cat, pair, gas) {
                Search::Found(wit) => Search::Found(EqualityRel {
                    pair,
                    wit,
                    limit_cert: wl.cert,
                }),
                Search::NotFound { .. } => panic!(
                    "internal soundness failure: equality witnesses missing on a certified weak limit"
                ),
                Search::Undecided(u) => Search::Undecided(u),
            }
        }
        Search::NotFound { checked } => Search::NotFound { checked },
        Search::Undecided(u) => Search::Undecided(u),
    }
}

/// A second, distinct equality for the same cone when one exists: used to
/// assert that downstream verdicts do not depend on the choice of equality.
pub fn alternate_equality_for_cone(
    cat: &FinCategory,
    cone: &Cone,
    first: &EqualityRel,
    gas: &mut Gas,
) -> Option<EqualityRel> {
    let d = Diagram::equality_shape(cat, cone);
    let cones = enumerate_cones(cat, &d, gas)?;
    for cand in &cones {
        if cand.apex == first.pair.x1
            && cand.legs[0] == first.pair.p1
            && cand.legs[1] == first.pair.p2
        {
            continue;
        }
        match certify_weakly_terminal(cat, cand, &cones, gas) {
            None => return None,
            Some(None) => continue,
            Some(Some(_)) => {
                let pair = ParallelPair {
                    x1: cand.apex,
                    x0: cone.apex,
                    p1: cand.legs[0],
                    p2: cand.legs[1],
                };
                if let Search::Found(wit) = certify_parallel_pair(cat, pair, gas) {
                    return Some(EqualityRel {
                        pair,
                        wit,
                        limit_cert: WeakLimitCert {
                            cones_checked: cones.len() as u64,
                            mediators: None,
                            completeness: if cat.exhaustive() {
                                Completeness::Exhaustive
                            } else {
                                Completeness::WithinCap
                            },
                        },
                    });
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Preserves projections
// ---------------------------------------------------------------------------

/// Witness that an arrow out of a weak-limit cone preserves projections with
/// respect to a pseudo equivalence relation on its codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresProj {
    pub tracking: Arr,
    pub equality: EqualityRel,
}

/// Search the tracking `h : V1 → Z1` with `z1 h = f v1` and `z2 h = f v2`,
/// where `V1 ⇉ V0` is an equality for the cone.
pub fn preserves_projections(
    cat: &FinCategory,
    cone: &Cone,
    f: Arr,
    rel: &ParallelPair,
    gas: &mut Gas,
) -> Search<PresProj> {
    debug_assert_eq!(cat.src(f), cone.apex);
    debug_assert_eq!(cat.dst(f), rel.x0);
    let equality = match equality_for_cone(cat, cone, gas) {
        Search::Found(e) => e,
        Search::NotFound { checked } => return Search::NotFound { checked },
        Search::Undecided(u) => return Search::Undecided(u),
    };
    preserves_projections_with(cat, &equality, f, rel, gas)
}

/// Same check against a caller-supplied equality.
pub fn preserves_projections_with(
    cat: &FinCategory,
    equality: &EqualityRel,
    f: Arr,
    rel: &ParallelPair,
    gas: &mut Gas,
) -> Search<PresProj> {
    let want1 = cat.compose(f, equality.pair.p1);
    let want2 = cat.compose(f, equality.pair.p2);
    let mut checked = 0u64;
    for &h in cat.hom(equality.pair.x1, rel.x1) {
        if !gas.spend(1) {
            return Search::Undecided(Undecided::budget());
        }
        checked += 1;
        if cat.compose(rel.p1, h) == want1 && cat.compose(rel.p2, h) == want2 {
            return Search::Found(PresProj {
                tracking: h,
                equality: equality.clone(),
            });
        }
    }
    Search::NotFound { checked }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catprovider::*;
    use crate::fincat::{Group, Payload};
    use crate::report::Budget;

    fn gas() -> Gas {
        Gas::new(Budget::new(50_000_000))
    }

    fn payload_images(c: &FinCategory, a: Arr) -> Vec<u32> {
        match &c.arrow_data(a).payload {
            Payload::Map(v) => v.clone(),
            _ => panic!("expected map payload"),
        }
    }

    #[test]
    fn chain2_weak_product_is_the_meet() {
        let c = make_chain2().unwrap();
        let (o0, o1) = (c.object_by_id("o0").unwrap(), c.object_by_id("o1").unwrap());
        let wl = weak_product(&c, o0, o1, &mut gas()).found().unwrap();
        assert_eq!(wl.cone.apex, o0);
        assert!(wl.reverify(&c, &Diagram::product(o0, o1)));
    }

    #[test]
    fn m3_weak_product_of_atoms_is_bottom() {
        let c = make_m3().unwrap();
        let (p, q) = (c.object_by_id("p").unwrap(), c.object_by_id("q").unwrap());
        let wl = weak_product(&c, p, q, &mut gas()).found().unwrap();
        assert_eq!(c.object_data(wl.cone.apex).id, "bot");
    }

    #[test]
    fn free_z2_weak_equalizer_of_distinct_endos_is_empty() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let endos: Vec<Arr> = c.hom(g, g).to_vec();
        let d = Diagram::parallel_pair(&c, endos[0], endos[1]);
        let wl = weak_limit(&c, &d, &mut gas()).found().unwrap();
        assert_eq!(c.object_data(wl.cone.apex).id, "0");
    }

    #[test]
    fn free_z2_weak_product_certifies_the_analytic_candidate() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let wl = weak_product(&c, g, g, &mut gas()).found().unwrap();
        assert_eq!(c.object_data(wl.cone.apex).id, "2G");
        assert!(wl.reverify(&c, &Diagram::product(g, g)));
    }

    #[test]
    fn nonthin_function_table_has_no_weak_product() {
        // finite table categories with weak binary products are thin, so the
        // deliberately non-thin full-function table must refute exhaustively
        let c = make_nonthin_functions().unwrap();
        let two = c.object_by_id("2").unwrap();
        match weak_product(&c, two, two, &mut gas()) {
            Search::NotFound { .. } => {}
            other => panic!("expected exhaustive refutation, got {other:?}"),
        }
    }

    #[test]
    fn finset_product_of_2_and_2_is_undecided_at_cap_3() {
        let c = make_finset(3).unwrap();
        let two = c.object_by_id("2").unwrap();
        match weak_product(&c, two, two, &mut gas()) {
            Search::Undecided(_) => {}
            other => panic!("expected undecided at cap, got {other:?}"),
        }
    }

    #[test]
    fn finset_product_of_1_and_2_found() {
        let c = make_finset(3).unwrap();
        let one = c.object_by_id("1").unwrap();
        let two = c.object_by_id("2").unwrap();
        let wl = weak_product(&c, one, two, &mut gas()).found().unwrap();
        assert_eq!(c.object_data(wl.cone.apex).id, "2");
        assert!(wl.reverify(&c, &Diagram::product(one, two)));
    }

    #[test]
    fn cone_preorder_of_chain2_pair_has_single_class() {
        let c = make_chain2().unwrap();
        let (o0, o1) = (c.object_by_id("o0").unwrap(), c.object_by_id("o1").unwrap());
        let cp = cone_preorder(&c, &Diagram::product(o0, o1), &mut gas())
            .found()
            .unwrap();
        assert_eq!(cp.classes.len(), 1);
        assert!(cp.is_poset_reflection());
        assert_eq!(cp.top_class, Some(0));
    }

    #[test]
    fn cone_preorder_of_m3_atom_pair_has_single_class() {
        let c = make_m3().unwrap();
        let (p, q) = (c.object_by_id("p").unwrap(), c.object_by_id("q").unwrap());
        let cp = cone_preorder(&c, &Diagram::product(p, q), &mut gas())
            .found()
            .unwrap();
        assert_eq!(cp.classes.len(), 1);
    }

    #[test]
    fn cone_preorder_top_class_matches_weak_limit_witness() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let d = Diagram::product(g, g);
        let cp = cone_preorder(&c, &d, &mut gas()).found().unwrap();
        let wl = weak_limit(&c, &d, &mut gas()).found().unwrap();
        let top = cp.top_class.expect("weak product exists");
        assert!(cp.classes[top].iter().any(|&i| cp.cones[i] == wl.cone));
    }

    #[test]
    fn thin_dbp_is_vacuous() {
        let c = make_m3().unwrap();
        let (p, q) = (c.object_by_id("p").unwrap(), c.object_by_id("q").unwrap());
        let wl = weak_product(&c, p, q, &mut gas()).found().unwrap();
        let top = c.object_by_id("top").unwrap();
        let f = c.hom(wl.cone.apex, top)[0];
        let rep = determined_by_projections(&c, &wl.cone, f, &mut gas()).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn inflated_weak_product_projections_dbp_but_summand_split_not() {
        // V = G ⊕ (G×G) covering G×G: a genuine weak product of (G, G) at
        // cap 3 that is not the product
        let c = make_free_gsets(Group::z2(), 3).unwrap();
        let g = c.object_by_id("G").unwrap();
        let v = c.object_by_id("3G").unwrap();
        let (_prod, p2, q2) = c.analytic_product(g, g).unwrap();
        let mut pimgs = vec![0u32];
        pimgs.extend(payload_images(&c, p2));
        let mut qimgs = vec![0u32];
        qimgs.extend(payload_images(&c, q2));
        let p = c.lookup_map_arrow(v, g, pimgs).unwrap();
        let q = c.lookup_map_arrow(v, g, qimgs).unwrap();
        let cone = Cone {
            apex: v,
            legs: vec![p, q],
        };
        let mut gascan = Gas::new(Budget::new(500_000_000));
        let cones = enumerate_cones(&c, &Diagram::product(g, g), &mut gascan).unwrap();
        for cn in &cones {
            assert!(matches!(
                factor_cone(&c, cn, &cone, &mut gascan),
                Some(Some(_))
            ));
        }
        // the projections themselves are determined by projections
        for leg in [p, q] {
            let rep = determined_by_projections(&c, &cone, leg, &mut gascan).unwrap();
            assert!(rep.holds, "projection should be dbp");
        }
        // a map collapsing the two summands differently is not
        let gg = c.object_by_id("2G").unwrap();
        let mut imgs = vec![0u32];
        for x in payload_images(&c, p2) {
            imgs.push(2 + x);
        }
        let m = c.lookup_map_arrow(v, gg, imgs).unwrap();
        let rep = determined_by_projections(&c, &cone, m, &mut gascan).unwrap();
        assert!(!rep.holds);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn chain2_equality_for_product_collapses_to_the_meet() {
        let c = make_chain2().unwrap();
        let (o0, o1) = (c.object_by_id("o0").unwrap(), c.object_by_id("o1").unwrap());
        let wl = weak_product(&c, o0, o1, &mut gas()).found().unwrap();
        let eq = equality_for_cone(&c, &wl.cone, &mut gas()).found().unwrap();
        assert_eq!(eq.pair.x1, o0);
        assert_eq!(eq.pair.x0, o0);
    }

    #[test]
    fn true_product_equality_is_diagonal_like() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let wl = weak_product(&c, g, g, &mut gas()).found().unwrap();
        let eq = equality_for_cone(&c, &wl.cone, &mut gas()).found().unwrap();
        // kernel pair of the identity: both legs agree
        assert_eq!(eq.pair.p1, eq.pair.p2);
    }

    #[test]
    fn chaotic_pair_on_free_orbit_certifies_at_cap_2() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let (_p, pr1, pr2) = c.analytic_product(g, g).unwrap();
        let pair = ParallelPair {
            x1: c.object_by_id("2G").unwrap(),
            x0: g,
            p1: pr1,
            p2: pr2,
        };
        let wit = certify_parallel_pair(&c, pair, &mut gas()).found().unwrap();
        assert!(wit.trans_checked > 0);
        // the canonical weak pullback needs four orbits, beyond this cap
        assert!(wit.pullback_t.is_none());
    }

    #[test]
    fn chaotic_pair_pullback_witness_exists_at_cap_4() {
        let c = make_free_gsets(Group::z2(), 4).unwrap();
        let g = c.object_by_id("G").unwrap();
        let (_p, pr1, pr2) = c.analytic_product(g, g).unwrap();
        let pair = ParallelPair {
            x1: c.object_by_id("2G").unwrap(),
            x0: g,
            p1: pr1,
            p2: pr2,
        };
        let wit = certify_parallel_pair(&c, pair, &mut Gas::new(Budget::new(2_000_000_000)))
            .found()
            .unwrap();
        let pt = wit.pullback_t.expect("weak pullback within cap 4");
        assert_eq!(c.object_data(pt.apex).id, "4G");
    }

    #[test]
    fn non_reflexive_pair_refuted() {
        let c = make_chain2().unwrap();
        let u = c.arrow_by_id("u").unwrap();
        let pair = ParallelPair {
            x1: c.object_by_id("o0").unwrap(),
            x0: c.object_by_id("o1").unwrap(),
            p1: u,
            p2: u,
        };
        assert!(certify_parallel_pair(&c, pair, &mut gas()).is_not_found());
    }

    #[test]
    fn preserves_projections_wrt_identity_iff_dbp() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let wl = weak_product(&c, g, g, &mut gas()).found().unwrap();
        let idrel = identity_pair(&c, g);
        let mut gascan = Gas::new(Budget::new(500_000_000));
        for &f in c.hom(wl.cone.apex, g) {
            let dbp = determined_by_projections(&c, &wl.cone, f, &mut gascan).unwrap();
            let pp = preserves_projections(&c, &wl.cone, f, &idrel, &mut gascan);
            assert_eq!(dbp.holds, pp.is_found(), "arrow {f:?}");
        }
    }

    #[test]
    fn verdict_independent_of_equality_choice_when_alternate_exists() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let wl = weak_product(&c, g, g, &mut gas()).found().unwrap();
        let mut gascan = Gas::new(Budget::new(500_000_000));
        let first = equality_for_cone(&c, &wl.cone, &mut gascan).found().unwrap();
        if let Some(second) = alternate_equality_for_cone(&c, &wl.cone, &first, &mut gascan) {
            let idrel = identity_pair(&c, g);
            for &f in c.hom(wl.cone.apex, g) {
                let v1 = preserves_projections_with(&c, &first, f, &idrel, &mut gascan);
                let v2 = preserves_projections_with(&c, &second, f, &idrel, &mut gascan);
                assert_eq!(v1.is_found(), v2.is_found());
            }
        }
    }
}
