//! Projectivity and internal projectivity of completion objects.
//!
//! Projectivity is decided twice — definitionally (lifting against every
//! enumerated cover) and by the retract characterisation (the canonical
//! cover splits) — and the two verdicts must agree. Internal projectivity
//! likewise runs the definitional square-filling check and, where products
//! exist, the preservation-of-projectives route.

use serde::{Deserialize, Serialize};

use super::{Completion, ExArrow, RelId};
use crate::report::{Completeness, Gas, Search, Undecided, Verdict};

/// Report for one object. `coherent` records that the paired routes agreed
/// wherever both reached a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectivityReport {
    pub object: RelId,
    pub projective_definitional: Verdict,
    pub projective_retract: Verdict,
    pub internally_projective_definitional: Verdict,
    pub internally_projective_products: Verdict,
    pub covers_checked: u64,
    pub squares_skipped: u64,
    pub coherent: bool,
    pub completeness: Completeness,
}

impl ProjectivityReport {
    pub fn projective(&self) -> Verdict {
        self.projective_definitional
    }

    pub fn internally_projective(&self) -> Verdict {
        self.internally_projective_definitional
    }
}

impl<'c> Completion<'c> {
    /// All regular-epi classes between deduplicated objects, in canonical
    /// order. `None` entries of the analysis (kernel pair out of cap) are
    /// skipped and counted.
    pub fn enumerate_covers(&self, gas: &mut Gas) -> Result<(Vec<ExArrow>, u64), Undecided> {
        let mut covers = Vec::new();
        let mut skipped = 0u64;
        for a in self.class_reps() {
            for b in self.class_reps() {
                for f in self.hom_classes(a, b) {
                    match self.is_regular_epi(f, gas)? {
                        Some(true) => covers.push(f),
                        Some(false) => {}
                        None => skipped += 1,
                    }
                }
            }
        }
        Ok((covers, skipped))
    }

    /// Does `a` lift against every enumerated cover?
    fn projective_definitional(
        &self,
        a: RelId,
        covers: &[ExArrow],
        gas: &mut Gas,
    ) -> Result<bool, Undecided> {
        for &e in covers {
            for f in self.hom_classes(a, e.dst) {
                if !gas.spend(1) {
                    return Err(Undecided::budget());
                }
                let lift = self
                    .hom_classes(a, e.src)
                    .into_iter()
                    .any(|g| self.compose(e, g) == f);
                if !lift {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Retract characterisation: the canonical cover splits.
    fn projective_retract(&self, a: RelId, gas: &mut Gas) -> Result<bool, Undecided> {
        let cover = self.canonical_cover(a);
        Ok(self.find_section(cover, gas)?.is_some())
    }

    /// Definitional internal projectivity: for every enumerated T, cover
    /// `A' ↠ B'` and arrow `T × a → B'` there are a base object U, a cover
    /// `ΓU ↠ T` and a filler `ΓU × a → A'`. Squares whose products are not
    /// constructible within the cap are skipped and counted.
    fn internally_projective_definitional(
        &self,
        a: RelId,
        covers: &[ExArrow],
        gas: &mut Gas,
    ) -> Result<(bool, u64), Undecided> {
        let mut skipped = 0u64;
        for t in self.class_reps() {
            let t_prod = match self.product(t, a, gas) {
                Search::Found(d) => d,
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            for &e in covers {
                for f in self.hom_classes(t_prod.obj, e.dst) {
                    if !gas.spend(1) {
                        return Err(Undecided::budget());
                    }
                    let mut filled = false;
                    'u_loop: for u in self.cat().objects() {
                        let gu = self.gamma(u);
                        let u_prod = match self.product(gu, a, gas) {
                            Search::Found(d) => d,
                            _ => {
                                skipped += 1;
                                continue;
                            }
                        };
                        for c in self.hom_classes(gu, t) {
                            let c_ok = match self.is_regular_epi(c, gas)? {
                                Some(true) => true,
                                _ => false,
                            };
                            if !c_ok {
                                continue;
                            }
                            // c × id : ΓU × a → T × a
                            let cxa = self.arrow_product(&u_prod, &t_prod, c, self.ex_id(a));
                            let want = self.compose(f, cxa);
                            for g in self.hom_classes(u_prod.obj, e.src) {
                                if !gas.spend(1) {
                                    return Err(Undecided::budget());
                                }
                                if self.compose(e, g) == want {
                                    filled = true;
                                    break 'u_loop;
                                }
                            }
                        }
                    }
                    if !filled {
                        return Ok((false, skipped));
                    }
                }
            }
        }
        Ok((true, skipped))
    }

    /// Product route: `(_) × a` preserves projectives on every enumerated
    /// projective where the product exists.
    fn internally_projective_products(
        &self,
        a: RelId,
        covers: &[ExArrow],
        gas: &mut Gas,
    ) -> Result<(bool, u64), Undecided> {
        let mut skipped = 0u64;
        for q in self.class_reps() {
            if !self.projective_definitional(q, covers, gas)? {
                continue;
            }
            let prod = match self.product(q, a, gas) {
                Search::Found(d) => d,
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            if !self.projective_definitional(prod.obj, covers, gas)? {
                return Ok((false, skipped));
            }
        }
        Ok((true, skipped))
    }

    /// Full projectivity report with both routes for each property.
    pub fn projectivity_report(&self, a: RelId, gas: &mut Gas) -> Result<ProjectivityReport, Undecided> {
        let (covers, cover_skipped) = self.enumerate_covers(gas)?;
        let p_def = self.projective_definitional(a, &covers, gas)?;
        let p_ret = self.projective_retract(a, gas)?;
        let (ip_def, sk1) = self.internally_projective_definitional(a, &covers, gas)?;
        let (ip_prod, sk2) = self.internally_projective_products(a, &covers, gas)?;
        let coherent = p_def == p_ret && ip_def == ip_prod;
        Ok(ProjectivityReport {
            object: a,
            projective_definitional: Verdict::from_bool(p_def),
            projective_retract: Verdict::from_bool(p_ret),
            internally_projective_definitional: Verdict::from_bool(ip_def),
            internally_projective_products: Verdict::from_bool(ip_prod),
            covers_checked: covers.len() as u64,
            squares_skipped: cover_skipped + sk1 + sk2,
            coherent,
            completeness: self.completeness(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catprovider::*;
    use crate::fincat::Group;
    use crate::report::Budget;
    use crate::weaklim::ParallelPair;

    fn gas() -> Gas {
        Gas::new(Budget::new(500_000_000))
    }

    #[test]
    fn gammas_are_projective_everywhere() {
        for cat in [make_chain2().unwrap(), make_m3().unwrap()] {
            let comp = Completion::new(&cat, Budget::new(500_000_000));
            for x in cat.objects() {
                let rep = comp
                    .projectivity_report(comp.gamma(x), &mut gas())
                    .unwrap();
                assert_eq!(rep.projective(), Verdict::Holds);
                assert!(rep.coherent);
            }
        }
    }

    #[test]
    fn thin_completions_are_entirely_projective() {
        let cat = make_chain2().unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        for r in comp.class_reps() {
            let rep = comp.projectivity_report(r, &mut gas()).unwrap();
            assert_eq!(rep.projective(), Verdict::Holds);
            assert_eq!(rep.internally_projective(), Verdict::Holds);
            assert!(rep.coherent);
        }
    }

    #[test]
    fn the_point_is_not_projective_over_free_z2() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let g_obj = cat.object_by_id("G").unwrap();
        let (_p, pr1, pr2) = cat.analytic_product(g_obj, g_obj).unwrap();
        let chaotic = ParallelPair {
            x1: cat.object_by_id("2G").unwrap(),
            x0: g_obj,
            p1: pr1,
            p2: pr2,
        };
        let pt = comp.intern(chaotic, &mut gas()).found().unwrap();
        let rep = comp.projectivity_report(pt, &mut gas()).unwrap();
        assert_eq!(rep.projective(), Verdict::Refuted);
        assert!(rep.coherent);
    }

    #[test]
    fn free_orbit_is_internally_projective_within_cap() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let g = comp.gamma(cat.object_by_id("G").unwrap());
        let rep = comp.projectivity_report(g, &mut gas()).unwrap();
        assert_eq!(rep.projective(), Verdict::Holds);
        assert_eq!(rep.internally_projective(), Verdict::Holds);
        assert!(rep.coherent);
    }
}
