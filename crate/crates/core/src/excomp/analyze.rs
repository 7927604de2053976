//! Arrow analysis in the completion: monos, split epis, isos, regular epis
//! (with their kernel-pair/coequalizer certificates), image factorizations,
//! covering squares and quasi-exact sequences.

use serde::{Deserialize, Serialize};

use super::{Completion, ExArrow, LimitData, RelId};
use crate::report::{Completeness, Gas, Search, Undecided};
use crate::weaklim::{weak_limit, Diagram, Edge, ParallelPair};

/// Certificate that an arrow is the coequalizer of its kernel pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularEpiCert {
    pub kernel_pair: RelId,
    pub instances_checked: u64,
    pub completeness: Completeness,
}

/// Flags with witnesses. `regular_epi` is `None` when the kernel pair could
/// not be built within the cap and no cheaper rule applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowAnalysis {
    pub mono: bool,
    pub split_epi: bool,
    pub section: Option<ExArrow>,
    pub iso: bool,
    pub inverse: Option<ExArrow>,
    pub regular_epi: Option<bool>,
    pub completeness: Completeness,
}

impl<'c> Completion<'c> {
    /// Monicity by enumeration: no two distinct classes into the source are
    /// merged by `f`.
    pub fn is_mono(&self, f: ExArrow, gas: &mut Gas) -> Result<bool, Undecided> {
        for t in self.class_reps() {
            let classes = self.hom_classes(t, f.src);
            for (i, &g) in classes.iter().enumerate() {
                for &h in &classes[i + 1..] {
                    if !gas.spend(1) {
                        return Err(Undecided::budget());
                    }
                    if self.compose(f, g) == self.compose(f, h) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn find_section(&self, f: ExArrow, gas: &mut Gas) -> Result<Option<ExArrow>, Undecided> {
        let idb = self.ex_id(f.dst);
        for s in self.hom_classes(f.dst, f.src) {
            if !gas.spend(1) {
                return Err(Undecided::budget());
            }
            if self.compose(f, s) == idb {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    pub fn find_inverse(&self, f: ExArrow, gas: &mut Gas) -> Result<Option<ExArrow>, Undecided> {
        let ida = self.ex_id(f.src);
        let idb = self.ex_id(f.dst);
        for g in self.hom_classes(f.dst, f.src) {
            if !gas.spend(1) {
                return Err(Undecided::budget());
            }
            if self.compose(f, g) == idb && self.compose(g, f) == ida {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// Is `f` a coequalizer of its kernel pair? `Ok(None)` when the kernel
    /// pair is not constructible within the cap.
    pub fn is_regular_epi(&self, f: ExArrow, gas: &mut Gas) -> Result<Option<bool>, Undecided> {
        if let Some(v) = self.regepi_cache_get(f) {
            return Ok(Some(v));
        }
        // split epis (hence isos) are regular
        if self.find_section(f, gas)?.is_some() {
            self.regepi_cache_put(f, true);
            return Ok(Some(true));
        }
        let kp = match self.kernel_pair(f, gas) {
            Search::Found(d) => d,
            Search::NotFound { .. } => return Ok(None),
            Search::Undecided(_) => return Ok(None),
        };
        let v = self.is_coequalizer_of(f, kp.legs[0], kp.legs[1], gas)?;
        self.regepi_cache_put(f, v);
        Ok(Some(v))
    }

    /// Is `e` a coequalizer of the parallel pair `(k1, k2)`? Checks
    /// `e k1 = e k2` plus the unique-factorization property over enumerated
    /// classes.
    pub fn is_coequalizer_of(
        &self,
        e: ExArrow,
        k1: ExArrow,
        k2: ExArrow,
        gas: &mut Gas,
    ) -> Result<bool, Undecided> {
        if self.compose(e, k1) != self.compose(e, k2) {
            return Ok(false);
        }
        for t in self.class_reps() {
            let from_b = self.hom_classes(e.dst, t);
            for g in self.hom_classes(e.src, t) {
                if !gas.spend(from_b.len() as u64 + 1) {
                    return Err(Undecided::budget());
                }
                if self.compose(g, k1) != self.compose(g, k2) {
                    continue;
                }
                let mut count = 0;
                for &h in &from_b {
                    if self.compose(h, e) == g {
                        count += 1;
                    }
                }
                if count != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Full flag analysis.
    pub fn analyze_arrow(&self, f: ExArrow, gas: &mut Gas) -> Result<ArrowAnalysis, Undecided> {
        let mono = self.is_mono(f, gas)?;
        let section = self.find_section(f, gas)?;
        let inverse = self.find_inverse(f, gas)?;
        let regular_epi = if inverse.is_some() || section.is_some() {
            Some(true)
        } else {
            self.is_regular_epi(f, gas)?
        };
        Ok(ArrowAnalysis {
            mono,
            split_epi: section.is_some(),
            section,
            iso: inverse.is_some(),
            inverse,
            regular_epi,
            completeness: self.completeness(),
        })
    }

    /// Image factorization `f = m ∘ e` with `e` regular epi and `m` mono.
    /// The image is the relation on the source carrier that identifies
    /// points with related images.
    pub fn image_factorization(
        &self,
        f: ExArrow,
        gas: &mut Gas,
    ) -> Search<(RelId, ExArrow, ExArrow)> {
        let cat = self.cat();
        let (pa, pb) = (self.pair(f.src), self.pair(f.dst));
        let frep = self.rep(f);
        let d = Diagram {
            nodes: vec![pa.x0, pa.x0, pb.x1, pb.x0, pb.x0],
            edges: vec![
                Edge { from: 0, to: 3, arrow: frep },
                Edge { from: 2, to: 3, arrow: pb.p1 },
                Edge { from: 1, to: 4, arrow: frep },
                Edge { from: 2, to: 4, arrow: pb.p2 },
            ],
        };
        let k = match weak_limit(cat, &d, gas) {
            Search::Found(wl) => wl,
            Search::NotFound { .. } | Search::Undecided(_) => {
                return self.image_by_scan(f, gas);
            }
        };
        let pair = ParallelPair {
            x1: k.cone.apex,
            x0: pa.x0,
            p1: k.cone.legs[0],
            p2: k.cone.legs[1],
        };
        let image = match self.intern(pair, gas) {
            Search::Found(i) => i,
            Search::NotFound { .. } => {
                panic!("internal soundness failure: image relation failed to certify")
            }
            Search::Undecided(u) => return Search::Undecided(u),
        };
        let e = self
            .class_of_map(f.src, image, cat.id(pa.x0))
            .expect("identity carries a tracking into the image relation");
        let m = self
            .class_of_map(image, f.dst, frep)
            .expect("the map itself is tracked out of the image relation");
        debug_assert_eq!(self.compose(m, e), f);
        match (self.is_regular_epi(e, gas), self.is_mono(m, gas)) {
            (Ok(Some(true)), Ok(true)) => Search::Found((image, e, m)),
            (Err(u), _) | (_, Err(u)) => Search::Undecided(u),
            _ => self.image_by_scan(f, gas),
        }
    }

    /// Fallback image search over enumerated classes.
    fn image_by_scan(&self, f: ExArrow, gas: &mut Gas) -> Search<(RelId, ExArrow, ExArrow)> {
        let mut checked = 0u64;
        for i in self.class_reps() {
            for e in self.hom_classes(f.src, i) {
                for m in self.hom_classes(i, f.dst) {
                    checked += 1;
                    if !gas.spend(1) {
                        return Search::Undecided(Undecided::budget());
                    }
                    if self.compose(m, e) != f {
                        continue;
                    }
                    let e_ok = match self.is_regular_epi(e, gas) {
                        Ok(Some(true)) => true,
                        Ok(_) => false,
                        Err(u) => return Search::Undecided(u),
                    };
                    if !e_ok {
                        continue;
                    }
                    let m_ok = match self.is_mono(m, gas) {
                        Ok(b) => b,
                        Err(u) => return Search::Undecided(u),
                    };
                    if m_ok {
                        return Search::Found((i, e, m));
                    }
                }
            }
        }
        if self.completeness().is_exhaustive() {
            Search::NotFound { checked }
        } else {
            Search::Undecided(Undecided::capped("image factorization"))
        }
    }

    /// Covering-square check: `q ∘ fbar = f ∘ p`, `q` is a cover and the
    /// canonical arrow from the top-left corner into the pullback of `f`
    /// against `q` is a cover.
    pub fn is_covering_square(
        &self,
        fbar: ExArrow,
        p: ExArrow,
        q: ExArrow,
        f: ExArrow,
        gas: &mut Gas,
    ) -> Result<Option<bool>, Undecided> {
        if self.compose(q, fbar) != self.compose(f, p) {
            return Ok(Some(false));
        }
        match self.is_regular_epi(q, gas)? {
            Some(true) => {}
            Some(false) => return Ok(Some(false)),
            None => return Ok(None),
        }
        let pb = match self.pullback(f, q, gas) {
            Search::Found(d) => d,
            _ => return Ok(None),
        };
        let canon = match self.mediate(&pb, p.src, &[p, fbar]) {
            Some(c) => c,
            None => return Ok(Some(false)),
        };
        self.is_regular_epi(canon, gas)
    }

    /// Quasi-exactness of `K ⇉ A → B`: the fork is a coequalizer and the
    /// canonical comparison into the kernel pair is a covering square.
    pub fn is_quasi_exact(
        &self,
        k1: ExArrow,
        k2: ExArrow,
        e: ExArrow,
        gas: &mut Gas,
    ) -> Result<Option<bool>, Undecided> {
        if !self.is_coequalizer_of(e, k1, k2, gas)? {
            return Ok(Some(false));
        }
        let kp = match self.kernel_pair(e, gas) {
            Search::Found(d) => d,
            _ => return Ok(None),
        };
        let canon = match self.mediate(&kp, k1.src, &[k1, k2]) {
            Some(c) => c,
            None => return Ok(Some(false)),
        };
        self.is_regular_epi(canon, gas)
    }

    /// The canonical quasi-exact presentation of an object: its own pair of
    /// relation legs followed by the canonical cover.
    pub fn canonical_presentation(&self, a: RelId) -> (ExArrow, ExArrow, ExArrow) {
        let pair = self.pair(a);
        let g1 = self.gamma(pair.x1);
        let g0 = self.gamma(pair.x0);
        let l1 = self
            .class_of_map(g1, g0, pair.p1)
            .expect("relation legs are tracked");
        let l2 = self
            .class_of_map(g1, g0, pair.p2)
            .expect("relation legs are tracked");
        (l1, l2, self.canonical_cover(a))
    }

    /// Quotient of an equivalence relation `r : R ↪ A × A` on `a`, returned
    /// as the relation on `a`'s carrier generated by the legs of `r`. Sound
    /// for reflexive relations, where the new pair subsumes `a`'s own one.
    pub fn quotient_of_equivalence(
        &self,
        a: RelId,
        prod_aa: &LimitData,
        r_mono: ExArrow,
        gas: &mut Gas,
    ) -> Search<(RelId, ExArrow)> {
        let leg1 = self.compose(prod_aa.legs[0], r_mono);
        let leg2 = self.compose(prod_aa.legs[1], r_mono);
        let pair = ParallelPair {
            x1: self.pair(r_mono.src).x0,
            x0: self.pair(a).x0,
            p1: self.rep(leg1),
            p2: self.rep(leg2),
        };
        match self.intern(pair, gas) {
            Search::Found(q) => {
                let cover = self
                    .class_of_map(a, q, self.cat().id(pair.x0))
                    .expect("carrier identity is tracked into the quotient");
                Search::Found((q, cover))
            }
            Search::NotFound { checked } => Search::NotFound { checked },
            Search::Undecided(u) => Search::Undecided(u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catprovider::*;
    use crate::fincat::Group;
    use crate::report::Budget;

    fn gas() -> Gas {
        Gas::new(Budget::new(500_000_000))
    }

    fn z2_completion(cat: &crate::fincat::FinCategory) -> Completion<'_> {
        Completion::new(cat, Budget::new(500_000_000))
    }

    #[test]
    fn identity_is_an_iso() {
        let cat = make_chain2().unwrap();
        let comp = z2_completion(&cat);
        let g0 = comp.gamma(cat.object_by_id("o0").unwrap());
        let a = comp.analyze_arrow(comp.ex_id(g0), &mut gas()).unwrap();
        assert!(a.iso && a.mono && a.split_epi);
        assert_eq!(a.regular_epi, Some(true));
    }

    #[test]
    fn chain2_arrow_is_mono_not_epi() {
        let cat = make_chain2().unwrap();
        let comp = z2_completion(&cat);
        let g0 = comp.gamma(cat.object_by_id("o0").unwrap());
        let g1 = comp.gamma(cat.object_by_id("o1").unwrap());
        let u = comp.hom_classes(g0, g1)[0];
        let a = comp.analyze_arrow(u, &mut gas()).unwrap();
        assert!(a.mono);
        assert!(!a.iso);
        assert_eq!(a.regular_epi, Some(false));
    }

    #[test]
    fn canonical_cover_of_the_point_is_regular_not_split() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = z2_completion(&cat);
        let g_obj = cat.object_by_id("G").unwrap();
        let (_p, pr1, pr2) = cat.analytic_product(g_obj, g_obj).unwrap();
        let chaotic = ParallelPair {
            x1: cat.object_by_id("2G").unwrap(),
            x0: g_obj,
            p1: pr1,
            p2: pr2,
        };
        let pt = comp.intern(chaotic, &mut gas()).found().unwrap();
        let cover = comp.canonical_cover(pt);
        let a = comp.analyze_arrow(cover, &mut gas()).unwrap();
        assert_eq!(a.regular_epi, Some(true));
        assert!(!a.split_epi, "no global section of a free orbit");
        assert!(!a.mono);
    }

    #[test]
    fn image_of_identity_is_trivial() {
        let cat = make_chain2().unwrap();
        let comp = z2_completion(&cat);
        let g0 = comp.gamma(cat.object_by_id("o0").unwrap());
        let (img, e, m) = comp
            .image_factorization(comp.ex_id(g0), &mut gas())
            .found()
            .unwrap();
        assert!(comp.is_isomorphic(img, g0));
        assert_eq!(comp.compose(m, e), comp.ex_id(g0));
    }

    #[test]
    fn image_of_mono_is_the_mono() {
        let cat = make_chain2().unwrap();
        let comp = z2_completion(&cat);
        let g0 = comp.gamma(cat.object_by_id("o0").unwrap());
        let g1 = comp.gamma(cat.object_by_id("o1").unwrap());
        let u = comp.hom_classes(g0, g1)[0];
        let (img, e, m) = comp.image_factorization(u, &mut gas()).found().unwrap();
        assert!(comp.is_isomorphic(img, g0));
        let ea = comp.analyze_arrow(e, &mut gas()).unwrap();
        assert!(ea.iso);
        let ma = comp.analyze_arrow(m, &mut gas()).unwrap();
        assert!(ma.mono);
    }

    #[test]
    fn image_of_fold_is_regular_epi_part() {
        // fold Γ(2G) → ΓG is already a cover: mono part is an iso
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = z2_completion(&cat);
        let g_obj = cat.object_by_id("G").unwrap();
        let gg_obj = cat.object_by_id("2G").unwrap();
        let fold_map = cat
            .lookup_map_arrow(gg_obj, g_obj, vec![0, 0])
            .expect("fold exists");
        let g = comp.gamma(g_obj);
        let gg = comp.gamma(gg_obj);
        let fold = comp.class_of_map(gg, g, fold_map).unwrap();
        let (img, e, m) = comp.image_factorization(fold, &mut gas()).found().unwrap();
        assert!(comp.is_isomorphic(img, g));
        let ma = comp.analyze_arrow(m, &mut gas()).unwrap();
        assert!(ma.iso);
        let ea = comp.analyze_arrow(e, &mut gas()).unwrap();
        assert_eq!(ea.regular_epi, Some(true));
    }

    #[test]
    fn canonical_presentation_is_quasi_exact() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = z2_completion(&cat);
        let g_obj = cat.object_by_id("G").unwrap();
        let (_p, pr1, pr2) = cat.analytic_product(g_obj, g_obj).unwrap();
        let chaotic = ParallelPair {
            x1: cat.object_by_id("2G").unwrap(),
            x0: g_obj,
            p1: pr1,
            p2: pr2,
        };
        let pt = comp.intern(chaotic, &mut gas()).found().unwrap();
        let (l1, l2, cover) = comp.canonical_presentation(pt);
        let qe = comp.is_quasi_exact(l1, l2, cover, &mut gas()).unwrap();
        assert_eq!(qe, Some(true));
    }
}
