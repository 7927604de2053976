//! The exact completion of a category with weak finite limits.
//!
//! Objects are pseudo equivalence relations `X1 ⇉ X0` in the base; arrows
//! are base arrows `X0 → Y0` carrying a tracking `X1 → Y1`, taken modulo the
//! homotopy relation (`f ~ g` iff some `H : X0 → Y1` has `y1 H = f` and
//! `y2 H = g`). A [`Completion`] eagerly enumerates and certifies every
//! relation within the budget, deduplicates up to isomorphism, and memoises
//! hom-sets; finite limits, image factorizations, subobject lattices and
//! projectivity reports live in the submodules and are each certified
//! against their universal property by enumeration.

mod analyze;
mod limits;
mod projectivity;
mod subobj;

pub use analyze::{ArrowAnalysis, RegularEpiCert};
pub use limits::{LimitCert, LimitData};
pub use projectivity::ProjectivityReport;
pub use subobj::SubobjectLattice;

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::fincat::{Arr, FinCategory, Obj};
use crate::report::{Budget, Completeness, Gas, Search, Undecided};
use crate::weaklim::{certify_parallel_pair, identity_pair, ParallelPair, RelWitnesses};

/// Index of a certified pseudo equivalence relation inside a [`Completion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelId(pub usize);

/// A certified object of the completion.
#[derive(Debug, Clone)]
pub struct RelData {
    pub pair: ParallelPair,
    pub wit: RelWitnesses,
}

/// A hom-class of the completion: tracked representative taken modulo
/// homotopy. The class index refers to the canonical order inside the
/// memoised hom-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExArrow {
    pub src: RelId,
    pub dst: RelId,
    pub class: usize,
}

/// Memoised hom-set between two relations: all tracked maps, partitioned
/// into homotopy classes.
#[derive(Debug)]
pub struct HomSet {
    /// `(map, tracking)` for every relation-preserving base arrow, in
    /// canonical arrow order; one tracking per map.
    pub tracked: Vec<(Arr, Arr)>,
    /// each class lists indices into `tracked`; class representative is the
    /// first member; classes ordered by representative
    pub classes: Vec<Vec<usize>>,
    class_of_map: HashMap<Arr, usize>,
}

impl HomSet {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn rep(&self, class: usize) -> (Arr, Arr) {
        self.tracked[self.classes[class][0]]
    }

    pub fn class_of(&self, map: Arr) -> Option<usize> {
        self.class_of_map.get(&map).copied()
    }
}

struct Inner {
    rels: Vec<RelData>,
    rel_lookup: HashMap<ParallelPair, usize>,
    class_of: Vec<usize>,
    class_reps: Vec<usize>,
    fingerprints: Vec<Vec<usize>>,
    homs: HashMap<(usize, usize), Rc<HomSet>>,
    frontier: Vec<ParallelPair>,
    limit_cache: HashMap<limits::LimitKey, LimitData>,
    regepi_cache: HashMap<ExArrow, bool>,
}

/// The exact completion of a handle, with memoised hom-sets. Create one per
/// thread; handles themselves are freely shareable.
pub struct Completion<'c> {
    cat: &'c FinCategory,
    inner: RefCell<Inner>,
}

impl<'c> Completion<'c> {
    /// Enumerate and certify every parallel pair within the budget,
    /// deduplicating up to isomorphism. Candidates whose certification ran
    /// out of gas are kept on the frontier.
    pub fn new(cat: &'c FinCategory, budget: Budget) -> Completion<'c> {
        let comp = Completion {
            cat,
            inner: RefCell::new(Inner {
                rels: Vec::new(),
                rel_lookup: HashMap::new(),
                class_of: Vec::new(),
                class_reps: Vec::new(),
                fingerprints: Vec::new(),
                homs: HashMap::new(),
                frontier: Vec::new(),
                limit_cache: HashMap::new(),
                regepi_cache: HashMap::new(),
            }),
        };
        let mut gas = Gas::new(budget);
        // identity relations are pushed unclassified first: fingerprints
        // compare hom-counts against them, so they must all exist before
        // any class assignment runs
        for x in cat.objects() {
            let pair = identity_pair(cat, x);
            match certify_parallel_pair(cat, pair, &mut gas) {
                Search::Found(wit) => {
                    comp.push_raw(pair, wit);
                }
                _ => panic!("identity relation failed to certify"),
            }
        }
        for i in 0..cat.object_count() {
            comp.assign_class(RelId(i));
        }
        for x1 in cat.objects() {
            for x0 in cat.objects() {
                for &p1 in cat.hom(x1, x0) {
                    for &p2 in cat.hom(x1, x0) {
                        let pair = ParallelPair { x1, x0, p1, p2 };
                        if comp.inner.borrow().rel_lookup.contains_key(&pair) {
                            continue;
                        }
                        match certify_parallel_pair(cat, pair, &mut gas) {
                            Search::Found(wit) => {
                                comp.register(pair, wit);
                            }
                            Search::NotFound { .. } => {}
                            Search::Undecided(_) => {
                                comp.inner.borrow_mut().frontier.push(pair);
                            }
                        }
                    }
                }
            }
        }
        comp
    }

    fn push_raw(&self, pair: ParallelPair, wit: RelWitnesses) -> RelId {
        let mut inner = self.inner.borrow_mut();
        let id = inner.rels.len();
        inner.rels.push(RelData { pair, wit });
        inner.rel_lookup.insert(pair, id);
        inner.class_of.push(usize::MAX);
        inner.fingerprints.push(Vec::new());
        RelId(id)
    }

    fn assign_class(&self, id: RelId) {
        let fp = self.fingerprint(id);
        let class = {
            let reps: Vec<usize> = self.inner.borrow().class_reps.clone();
            let mut found = None;
            for (c, &rep) in reps.iter().enumerate() {
                if self.inner.borrow().fingerprints[rep] != fp {
                    continue;
                }
                if self.isomorphic(id, RelId(rep)) {
                    found = Some(c);
                    break;
                }
            }
            found
        };
        let mut inner = self.inner.borrow_mut();
        inner.fingerprints[id.0] = fp;
        match class {
            Some(c) => inner.class_of[id.0] = c,
            None => {
                let c = inner.class_reps.len();
                inner.class_reps.push(id.0);
                inner.class_of[id.0] = c;
            }
        }
    }

    fn register(&self, pair: ParallelPair, wit: RelWitnesses) -> RelId {
        let id = self.push_raw(pair, wit);
        self.assign_class(id);
        id
    }

    /// Hom-count fingerprint used to prune the isomorphism search: the
    /// number of classes into and out of every identity relation.
    fn fingerprint(&self, r: RelId) -> Vec<usize> {
        let mut fp = Vec::with_capacity(2 * self.cat.object_count());
        for x in self.cat.objects() {
            let g = self.gamma(x);
            fp.push(self.hom(g, r).class_count());
            fp.push(self.hom(r, g).class_count());
        }
        fp
    }

    fn isomorphic(&self, a: RelId, b: RelId) -> bool {
        let hab = self.hom(a, b);
        let hba = self.hom(b, a);
        let ida = self.ex_id(a);
        let idb = self.ex_id(b);
        for fc in 0..hab.class_count() {
            let f = ExArrow { src: a, dst: b, class: fc };
            for gc in 0..hba.class_count() {
                let g = ExArrow { src: b, dst: a, class: gc };
                if self.compose(g, f) == ida && self.compose(f, g) == idb {
                    return true;
                }
            }
        }
        false
    }

    pub fn cat(&self) -> &'c FinCategory {
        self.cat
    }

    pub fn completeness(&self) -> Completeness {
        let exhaustive = self.cat.exhaustive() && self.inner.borrow().frontier.is_empty();
        if exhaustive {
            Completeness::Exhaustive
        } else {
            Completeness::WithinCap
        }
    }

    pub fn rel_count(&self) -> usize {
        self.inner.borrow().rels.len()
    }

    pub fn rel_ids(&self) -> Vec<RelId> {
        (0..self.rel_count()).map(RelId).collect()
    }

    pub fn pair(&self, r: RelId) -> ParallelPair {
        self.inner.borrow().rels[r.0].pair
    }

    pub fn rel(&self, r: RelId) -> RelData {
        self.inner.borrow().rels[r.0].clone()
    }

    /// Deduplicated object list: one representative per isomorphism class,
    /// in canonical order.
    pub fn class_reps(&self) -> Vec<RelId> {
        self.inner.borrow().class_reps.iter().map(|&i| RelId(i)).collect()
    }

    pub fn class_of(&self, r: RelId) -> usize {
        self.inner.borrow().class_of[r.0]
    }

    /// Candidate pairs whose certification ran out of budget.
    pub fn frontier(&self) -> Vec<ParallelPair> {
        self.inner.borrow().frontier.clone()
    }

    /// Intern a certified relation that is not necessarily part of the
    /// eager enumeration (e.g. built from weak limits by a construction).
    pub fn intern(&self, pair: ParallelPair, gas: &mut Gas) -> Search<RelId> {
        if let Some(&i) = self.inner.borrow().rel_lookup.get(&pair) {
            return Search::Found(RelId(i));
        }
        match certify_parallel_pair(self.cat, pair, gas) {
            Search::Found(wit) => Search::Found(self.register(pair, wit)),
            Search::NotFound { checked } => Search::NotFound { checked },
            Search::Undecided(u) => Search::Undecided(u),
        }
    }

    // -- the projective embedding ------------------------------------------

    /// Γ on objects: the identity relation. Every base object is registered
    /// during construction.
    pub fn gamma(&self, x: Obj) -> RelId {
        let pair = identity_pair(self.cat, x);
        RelId(self.inner.borrow().rel_lookup[&pair])
    }

    /// Γ on arrows.
    pub fn gamma_arrow(&self, f: Arr) -> ExArrow {
        let src = self.gamma(self.cat.src(f));
        let dst = self.gamma(self.cat.dst(f));
        self.class_of_map(src, dst, f)
            .expect("base arrow is tracked between identity relations")
    }

    /// The canonical cover `Γ(X0) ↠ A` represented by the identity of X0.
    pub fn canonical_cover(&self, a: RelId) -> ExArrow {
        let pair = self.pair(a);
        let src = self.gamma(pair.x0);
        self.class_of_map(src, a, self.cat.id(pair.x0))
            .expect("identity map is tracked from the cover")
    }

    // -- hom-sets -----------------------------------------------------------

    /// Memoised hom-set computation: tracked maps modulo homotopy. Asserts
    /// that the raw homotopy relation is already an equivalence; a failure
    /// there indicates witness bugs.
    pub fn hom(&self, a: RelId, b: RelId) -> Rc<HomSet> {
        if let Some(h) = self.inner.borrow().homs.get(&(a.0, b.0)) {
            return Rc::clone(h);
        }
        let (pa, pb) = (self.pair(a), self.pair(b));
        let cat = self.cat;
        let mut tracked: Vec<(Arr, Arr)> = Vec::new();
        for &f in cat.hom(pa.x0, pb.x0) {
            let want1 = cat.compose(f, pa.p1);
            let want2 = cat.compose(f, pa.p2);
            let t = cat
                .hom(pa.x1, pb.x1)
                .iter()
                .copied()
                .find(|&t| cat.compose(pb.p1, t) == want1 && cat.compose(pb.p2, t) == want2);
            if let Some(t) = t {
                tracked.push((f, t));
            }
        }
        // homotopy: f ~ g iff some H : X0 → Y1 has y1 H = f and y2 H = g
        let n = tracked.len();
        let mut raw = vec![vec![false; n]; n];
        let homotopies: Vec<Arr> = cat.hom(pa.x0, pb.x1).to_vec();
        for (i, &(f, _)) in tracked.iter().enumerate() {
            for (j, &(g, _)) in tracked.iter().enumerate() {
                raw[i][j] = homotopies
                    .iter()
                    .any(|&h| cat.compose(pb.p1, h) == f && cat.compose(pb.p2, h) == g);
            }
        }
        // the raw relation must already be an equivalence
        for i in 0..n {
            assert!(raw[i][i], "homotopy not reflexive: witness bug");
            for j in 0..n {
                assert_eq!(raw[i][j], raw[j][i], "homotopy not symmetric: witness bug");
                for k in 0..n {
                    if raw[i][j] && raw[j][k] {
                        assert!(raw[i][k], "homotopy not transitive: witness bug");
                    }
                }
            }
        }
        let mut class_ix = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_ix[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = Vec::new();
            for j in i..n {
                if class_ix[j] == usize::MAX && raw[i][j] {
                    class_ix[j] = c;
                    members.push(j);
                }
            }
            classes.push(members);
        }
        let mut class_of_map = HashMap::new();
        for (c, members) in classes.iter().enumerate() {
            for &m in members {
                class_of_map.insert(tracked[m].0, c);
            }
        }
        let hs = Rc::new(HomSet {
            tracked,
            classes,
            class_of_map,
        });
        self.inner
            .borrow_mut()
            .homs
            .insert((a.0, b.0), Rc::clone(&hs));
        hs
    }

    pub fn hom_classes(&self, a: RelId, b: RelId) -> Vec<ExArrow> {
        (0..self.hom(a, b).class_count())
            .map(|class| ExArrow { src: a, dst: b, class })
            .collect()
    }

    /// Canonical representative map of a class.
    pub fn rep(&self, f: ExArrow) -> Arr {
        self.hom(f.src, f.dst).rep(f.class).0
    }

    /// A tracking of the representative.
    pub fn rep_tracking(&self, f: ExArrow) -> Arr {
        self.hom(f.src, f.dst).rep(f.class).1
    }

    pub fn class_of_map(&self, a: RelId, b: RelId, m: Arr) -> Option<ExArrow> {
        self.hom(a, b).class_of(m).map(|class| ExArrow {
            src: a,
            dst: b,
            class,
        })
    }

    pub fn ex_id(&self, a: RelId) -> ExArrow {
        let x0 = self.pair(a).x0;
        self.class_of_map(a, a, self.cat.id(x0))
            .expect("identity is tracked")
    }

    /// Composition on classes: compose representatives, look up the class.
    pub fn compose(&self, g: ExArrow, f: ExArrow) -> ExArrow {
        debug_assert_eq!(f.dst, g.src);
        let m = self.cat.compose(self.rep(g), self.rep(f));
        self.class_of_map(f.src, g.dst, m)
            .expect("composite of tracked maps is tracked")
    }

    pub fn is_isomorphic(&self, a: RelId, b: RelId) -> bool {
        self.class_of(a) == self.class_of(b) || self.isomorphic(a, b)
    }

    /// First isomorphism found between two objects, if any.
    pub fn find_iso(&self, a: RelId, b: RelId) -> Option<(ExArrow, ExArrow)> {
        let hab = self.hom(a, b);
        let hba = self.hom(b, a);
        let ida = self.ex_id(a);
        let idb = self.ex_id(b);
        for fc in 0..hab.class_count() {
            let f = ExArrow { src: a, dst: b, class: fc };
            for gc in 0..hba.class_count() {
                let g = ExArrow { src: b, dst: a, class: gc };
                if self.compose(g, f) == ida && self.compose(f, g) == idb {
                    return Some((f, g));
                }
            }
        }
        None
    }

    fn limit_cache_get(&self, key: &limits::LimitKey) -> Option<LimitData> {
        self.inner.borrow().limit_cache.get(key).cloned()
    }

    fn limit_cache_put(&self, key: limits::LimitKey, data: LimitData) {
        self.inner.borrow_mut().limit_cache.insert(key, data);
    }

    fn regepi_cache_get(&self, f: ExArrow) -> Option<bool> {
        self.inner.borrow().regepi_cache.get(&f).copied()
    }

    fn regepi_cache_put(&self, f: ExArrow, v: bool) {
        self.inner.borrow_mut().regepi_cache.insert(f, v);
    }

    /// Check the embedding is full and faithful by comparing hom-sets
    /// between identity relations with base hom-sets.
    pub fn check_embedding_fully_faithful(&self) -> Result<(), String> {
        for x in self.cat.objects() {
            for y in self.cat.objects() {
                let hs = self.hom(self.gamma(x), self.gamma(y));
                let base = self.cat.hom(x, y);
                if hs.tracked.len() != base.len() {
                    return Err(format!(
                        "embedding not full on hom({}, {})",
                        self.cat.object_data(x).id,
                        self.cat.object_data(y).id
                    ));
                }
                if hs.class_count() != base.len() {
                    return Err(format!(
                        "embedding not faithful on hom({}, {})",
                        self.cat.object_data(x).id,
                        self.cat.object_data(y).id
                    ));
                }
            }
        }
        Ok(())
    }

    /// Spot-check that composition and identities are well defined on
    /// homotopy classes: every member of a class composed with every member
    /// of another lands in the composite's class.
    pub fn check_category_laws(&self, objects: &[RelId]) -> Result<(), String> {
        for &a in objects {
            for &b in objects {
                let hab = self.hom(a, b);
                for &c in objects {
                    let hbc = self.hom(b, c);
                    for (fc, fmembers) in hab.classes.iter().enumerate() {
                        for (gc, gmembers) in hbc.classes.iter().enumerate() {
                            let f = ExArrow { src: a, dst: b, class: fc };
                            let g = ExArrow { src: b, dst: c, class: gc };
                            let expect = self.compose(g, f);
                            for &fm in fmembers {
                                for &gm in gmembers {
                                    let m = self
                                        .cat
                                        .compose(hbc.tracked[gm].0, hab.tracked[fm].0);
                                    let got = self
                                        .class_of_map(a, c, m)
                                        .ok_or("composite not tracked")?;
                                    if got != expect {
                                        return Err(
                                            "composition not well defined on classes".into()
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
                let ida = self.ex_id(a);
                for fc in 0..hab.class_count() {
                    let f = ExArrow { src: a, dst: b, class: fc };
                    if self.compose(f, ida) != f || self.compose(self.ex_id(b), f) != f {
                        return Err("identity law fails on classes".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Deduplicated enumeration of the completion's objects, with the
/// undecided frontier.
pub fn enumerate_ex_objects(comp: &Completion<'_>) -> (Vec<RelId>, Vec<ParallelPair>) {
    (comp.class_reps(), comp.frontier())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndecidedInfo {
    pub reason: String,
}

impl From<Undecided> for UndecidedInfo {
    fn from(u: Undecided) -> UndecidedInfo {
        UndecidedInfo { reason: u.reason }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catprovider::*;
    use crate::fincat::Group;

    fn big_budget() -> Budget {
        Budget::new(500_000_000)
    }

    #[test]
    fn chain2_completion_has_two_classes() {
        let cat = make_chain2().unwrap();
        let comp = Completion::new(&cat, big_budget());
        assert_eq!(comp.class_reps().len(), 2);
        assert!(comp.frontier().is_empty());
        assert_eq!(comp.completeness(), Completeness::Exhaustive);
    }

    #[test]
    fn one_completion_has_one_class() {
        let cat = make_one().unwrap();
        let comp = Completion::new(&cat, big_budget());
        assert_eq!(comp.class_reps().len(), 1);
    }

    #[test]
    fn m3_completion_is_m3_again() {
        let cat = make_m3().unwrap();
        let comp = Completion::new(&cat, big_budget());
        assert_eq!(comp.class_reps().len(), 5);
    }

    #[test]
    fn free_z2_cap2_classes_include_the_point() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, big_budget());
        // Γ0, ΓG, Γ2G and the one-point quotient of the chaotic relation
        assert_eq!(comp.class_reps().len(), 4);
        // find the point: hom(T, pt) has exactly one class for every T
        let reps = comp.class_reps();
        let pt = reps
            .iter()
            .copied()
            .find(|&r| reps.iter().all(|&t| comp.hom(t, r).class_count() == 1))
            .expect("terminal class exists");
        // it is the quotient of the chaotic relation on G: x0 has one orbit
        assert_eq!(cat.object_data(comp.pair(pt).x0).id, "G");
    }

    #[test]
    fn finset_cap3_classes_are_the_four_cardinalities() {
        let cat = make_finset(3).unwrap();
        let comp = Completion::new(&cat, big_budget());
        assert_eq!(comp.class_reps().len(), 4);
    }

    #[test]
    fn embedding_fully_faithful_on_fixtures() {
        for cat in [
            make_chain2().unwrap(),
            make_m3().unwrap(),
            make_free_gsets(Group::z2(), 2).unwrap(),
        ] {
            let comp = Completion::new(&cat, big_budget());
            comp.check_embedding_fully_faithful().unwrap();
        }
    }

    #[test]
    fn hom_counts_match_thin_and_full_cases() {
        let cat = make_chain2().unwrap();
        let comp = Completion::new(&cat, big_budget());
        let g0 = comp.gamma(cat.object_by_id("o0").unwrap());
        let g1 = comp.gamma(cat.object_by_id("o1").unwrap());
        assert_eq!(comp.hom(g0, g1).class_count(), 1);
        assert_eq!(comp.hom(g1, g0).class_count(), 0);

        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, big_budget());
        let g = comp.gamma(cat.object_by_id("G").unwrap());
        assert_eq!(comp.hom(g, g).class_count(), 2);
    }

    #[test]
    fn point_has_no_arrows_into_free_orbit() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, big_budget());
        let g_obj = cat.object_by_id("G").unwrap();
        let gg_obj = cat.object_by_id("2G").unwrap();
        let (_p, pr1, pr2) = cat.analytic_product(g_obj, g_obj).unwrap();
        let chaotic = ParallelPair {
            x1: gg_obj,
            x0: g_obj,
            p1: pr1,
            p2: pr2,
        };
        let mut gas = Gas::new(big_budget());
        let pt = comp.intern(chaotic, &mut gas).found().unwrap();
        let gamma_g = comp.gamma(g_obj);
        // no section of the canonical cover: the point is not projective
        assert_eq!(comp.hom(pt, gamma_g).class_count(), 0);
        assert_eq!(comp.hom(gamma_g, pt).class_count(), 1);
    }

    #[test]
    fn category_laws_hold_on_classes() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, big_budget());
        let reps = comp.class_reps();
        comp.check_category_laws(&reps).unwrap();
    }

    #[test]
    fn canonical_cover_exists_for_every_object() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, big_budget());
        for r in comp.rel_ids() {
            let cover = comp.canonical_cover(r);
            assert_eq!(cover.dst, r);
        }
    }
}
