//! Subobject lattices in the completion.
//!
//! A subobject of `A` is an isomorphism class of monos into `A`, ordered by
//! factorization. Meets are computed by certified pullbacks. For an embedded
//! projective the lattice is cross-checked elsewhere against the order
//! reflection of the cone preorder over its slice.

use serde::{Deserialize, Serialize};

use super::{Completion, ExArrow, RelId};
use crate::report::{Completeness, Gas, Search, Undecided};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubClass {
    pub dom: RelId,
    pub mono: ExArrow,
}

/// The subobject lattice of an object: classes in canonical order, the
/// partial order, top (the identity) and bottom when present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubobjectLattice {
    pub ambient: RelId,
    pub classes: Vec<SubClass>,
    pub leq: Vec<Vec<bool>>,
    pub top: usize,
    pub bottom: Option<usize>,
    pub completeness: Completeness,
}

impl SubobjectLattice {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

impl<'c> Completion<'c> {
    /// Enumerate the subobject lattice of `a`: monos from every deduplicated
    /// object, quotiented by mutual factorization.
    pub fn subobjects(&self, a: RelId, gas: &mut Gas) -> Search<SubobjectLattice> {
        let mut monos: Vec<(RelId, ExArrow)> = Vec::new();
        for s in self.class_reps() {
            for m in self.hom_classes(s, a) {
                if !gas.spend(1) {
                    return Search::Undecided(Undecided::budget());
                }
                match self.is_mono(m, gas) {
                    Ok(true) => monos.push((s, m)),
                    Ok(false) => {}
                    Err(u) => return Search::Undecided(u),
                }
            }
        }
        // factorization order on representatives
        let n = monos.len();
        let mut raw_leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if !gas.spend(1) {
                    return Search::Undecided(Undecided::budget());
                }
                raw_leq[i][j] = self
                    .hom_classes(monos[i].0, monos[j].0)
                    .into_iter()
                    .any(|u| self.compose(monos[j].1, u) == monos[i].1);
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for j in i..n {
                if class_of[j] == usize::MAX && raw_leq[i][j] && raw_leq[j][i] {
                    class_of[j] = c;
                }
            }
        }
        let m = reps.len();
        let mut leq = vec![vec![false; m]; m];
        for a_ix in 0..m {
            for b_ix in 0..m {
                leq[a_ix][b_ix] = raw_leq[reps[a_ix]][reps[b_ix]];
            }
        }
        let id = self.ex_id(a);
        let top = (0..m)
            .find(|&c| {
                let (_, mono) = monos[reps[c]];
                mono == id || (0..m).all(|other| leq[other][c])
            })
            .expect("identity subobject is enumerated");
        let bottom = (0..m).find(|&c| (0..m).all(|other| leq[c][other]));
        let classes = reps
            .iter()
            .map(|&i| SubClass {
                dom: monos[i].0,
                mono: monos[i].1,
            })
            .collect();
        Search::Found(SubobjectLattice {
            ambient: a,
            classes,
            leq,
            top,
            bottom,
            completeness: self.completeness(),
        })
    }

    /// Meet of two subobject classes via a certified pullback; returns the
    /// class index of the result and asserts it is a greatest lower bound.
    pub fn sub_meet(
        &self,
        lat: &SubobjectLattice,
        i: usize,
        j: usize,
        gas: &mut Gas,
    ) -> Search<usize> {
        let pb = match self.pullback(lat.classes[i].mono, lat.classes[j].mono, gas) {
            Search::Found(d) => d,
            Search::NotFound { checked } => return Search::NotFound { checked },
            Search::Undecided(u) => return Search::Undecided(u),
        };
        let mono = self.compose(lat.classes[i].mono, pb.legs[0]);
        let k = match self.sub_class_of(lat, pb.obj, mono, gas) {
            Ok(Some(k)) => k,
            Ok(None) => panic!("internal soundness failure: meet not among enumerated subobjects"),
            Err(u) => return Search::Undecided(u),
        };
        debug_assert!(lat.leq[k][i] && lat.leq[k][j]);
        debug_assert!((0..lat.len())
            .all(|o| !(lat.leq[o][i] && lat.leq[o][j]) || lat.leq[o][k]));
        Search::Found(k)
    }

    /// Locate the class of a mono inside an enumerated lattice by mutual
    /// factorization.
    pub fn sub_class_of(
        &self,
        lat: &SubobjectLattice,
        dom: RelId,
        mono: ExArrow,
        gas: &mut Gas,
    ) -> Result<Option<usize>, Undecided> {
        for (k, sc) in lat.classes.iter().enumerate() {
            if !gas.spend(1) {
                return Err(Undecided::budget());
            }
            let fwd = self
                .hom_classes(dom, sc.dom)
                .into_iter()
                .any(|u| self.compose(sc.mono, u) == mono);
            if !fwd {
                continue;
            }
            let bwd = self
                .hom_classes(sc.dom, dom)
                .into_iter()
                .any(|u| self.compose(mono, u) == sc.mono);
            if bwd {
                return Ok(Some(k));
            }
        }
        Ok(None)
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

    #[test]
    fn sub_of_m3_top_is_m3() {
        let cat = make_m3().unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let top = comp.gamma(cat.object_by_id("top").unwrap());
        let lat = comp.subobjects(top, &mut gas()).found().unwrap();
        assert_eq!(lat.len(), 5);
        assert_eq!(lat.bottom.is_some(), true);
        // meets of the two atoms land at bottom
        let p = comp.gamma(cat.object_by_id("p").unwrap());
        let q = comp.gamma(cat.object_by_id("q").unwrap());
        let pi = (0..lat.len())
            .find(|&k| comp.is_isomorphic(lat.classes[k].dom, p))
            .unwrap();
        let qi = (0..lat.len())
            .find(|&k| comp.is_isomorphic(lat.classes[k].dom, q))
            .unwrap();
        let meet = comp.sub_meet(&lat, pi, qi, &mut gas()).found().unwrap();
        assert_eq!(Some(meet), lat.bottom);
    }

    #[test]
    fn sub_of_free_orbit_has_two_elements() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let g = comp.gamma(cat.object_by_id("G").unwrap());
        let lat = comp.subobjects(g, &mut gas()).found().unwrap();
        assert_eq!(lat.len(), 2); // empty and identity
        assert!(lat.bottom.is_some());
    }

    #[test]
    fn sub_of_chain2_top_is_chain2() {
        let cat = make_chain2().unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let g1 = comp.gamma(cat.object_by_id("o1").unwrap());
        let lat = comp.subobjects(g1, &mut gas()).found().unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat.leq[lat.bottom.unwrap()][lat.top]);
    }

    #[test]
    fn sub_of_two_orbits_is_boolean_square() {
        let cat = make_free_gsets(Group::z2(), 2).unwrap();
        let comp = Completion::new(&cat, Budget::new(500_000_000));
        let gg = comp.gamma(cat.object_by_id("2G").unwrap());
        let lat = comp.subobjects(gg, &mut gas()).found().unwrap();
        // empty, two single orbits, identity
        assert_eq!(lat.len(), 4);
    }
}
