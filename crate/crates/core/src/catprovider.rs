//! Generated computable category families: finite sets, free G-sets, finite
//! preorders, and the truncated two-infinities poset, plus presheaves over
//! thin handles.
//!
//! Every family materialises into a [`FinCategory`] handle with a canonical
//! generation order. Capped families (`finset`, `free-gsets`) are marked
//! non-exhaustive: searches over them may confirm witnesses but never refute.

use crate::fincat::{
    Analytic, ArrowData, BuildError, CompRule, FinCategory, Group, Obj, ObjectData, Payload,
};

/// Enumerate all functions `src_size → dst_size` as image vectors, in
/// lexicographic order.
fn all_maps(src_size: u32, dst_size: u32) -> Vec<Vec<u32>> {
    if src_size == 0 {
        return vec![Vec::new()];
    }
    if dst_size == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; src_size as usize];
    loop {
        out.push(cur.clone());
        let mut i = src_size as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < dst_size {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Skeletal finite sets of size ≤ cap with all functions. Marked
/// non-exhaustive: the family continues past the cap.
pub fn make_finset(cap: u32) -> Result<FinCategory, BuildError> {
    let objects: Vec<ObjectData> = (0..=cap)
        .map(|n| ObjectData {
            id: n.to_string(),
            grade: n,
        })
        .collect();
    let sizes: Vec<u32> = (0..=cap).collect();
    let mut declared = Vec::new();
    for (s, &ssize) in sizes.iter().enumerate() {
        for (d, &dsize) in sizes.iter().enumerate() {
            for images in all_maps(ssize, dsize) {
                // skip the identity; assemble() synthesises it
                if s == d && images.iter().enumerate().all(|(i, &x)| x == i as u32) {
                    continue;
                }
                let tag: String = images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
                declared.push(ArrowData {
                    id: format!("m{}to{}_{}", s, d, tag),
                    src: Obj(s),
                    dst: Obj(d),
                    payload: Payload::Map(images),
                });
            }
        }
    }
    FinCategory::assemble(
        format!("finset{cap}"),
        objects,
        declared,
        CompRule::FinSet { sizes },
        false,
        Analytic::FinSet,
    )
}

/// Free G-sets with ≤ cap orbits (including the empty one) and equivariant
/// maps. An equivariant map out of `k·G` is freely determined by the images
/// of the `k` orbit generators. Non-exhaustive.
pub fn make_free_gsets(group: Group, cap: u32) -> Result<FinCategory, BuildError> {
    group.validate().map_err(BuildError::Invalid)?;
    let n = group.order() as u32;
    let objects: Vec<ObjectData> = (0..=cap)
        .map(|k| ObjectData {
            id: match k {
                0 => "0".to_string(),
                1 => "G".to_string(),
                k => format!("{k}G"),
            },
            grade: k,
        })
        .collect();
    let orbits: Vec<u32> = (0..=cap).collect();
    let mut declared = Vec::new();
    for s in 0..=cap {
        for d in 0..=cap {
            for images in all_maps(s, d * n) {
                if s == d && images.iter().enumerate().all(|(i, &x)| x == i as u32 * n + group.unit)
                {
                    continue;
                }
                let tag: String = images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_");
                declared.push(ArrowData {
                    id: format!("g{}to{}_{}", s, d, tag),
                    src: Obj(s as usize),
                    dst: Obj(d as usize),
                    payload: Payload::Map(images),
                });
            }
        }
    }
    FinCategory::assemble(
        format!("free_{}_{cap}", group.name),
        objects,
        declared,
        CompRule::FreeG { group, orbits },
        false,
        Analytic::FreeG,
    )
}

/// Wrap a thin finite table as a preorder handle. Rejects non-thin input.
pub fn make_preorder(c: FinCategory) -> Result<FinCategory, BuildError> {
    for x in c.objects() {
        for y in c.objects() {
            if c.hom(x, y).len() > 1 {
                return Err(BuildError::Invalid(format!(
                    "not thin: |hom({}, {})| = {}",
                    c.object_data(x).id,
                    c.object_data(y).id,
                    c.hom(x, y).len()
                )));
            }
        }
    }
    Ok(c)
}

/// Build a thin category from a reflexive-transitive relation given as
/// `leq(i, j)`.
fn thin_from_leq(
    name: &str,
    ids: Vec<String>,
    leq: impl Fn(usize, usize) -> bool,
) -> Result<FinCategory, BuildError> {
    let objects: Vec<ObjectData> = ids
        .iter()
        .map(|id| ObjectData {
            id: id.clone(),
            grade: 0,
        })
        .collect();
    let mut declared = Vec::new();
    for i in 0..ids.len() {
        for j in 0..ids.len() {
            if i != j && leq(i, j) {
                declared.push(ArrowData {
                    id: format!("le_{}_{}", ids[i], ids[j]),
                    src: Obj(i),
                    dst: Obj(j),
                    payload: Payload::Table,
                });
            }
        }
    }
    FinCategory::assemble(
        name.to_string(),
        objects,
        declared,
        CompRule::Thin,
        true,
        Analytic::None,
    )
}

/// Finite truncation of the natural numbers with two distinct infinity
/// points: `{0..k, a, b}` ordered by `n ≤ n+1`, `n ≤ a`, `n ≤ b`.
pub fn make_two_infinities(k: u32) -> Result<FinCategory, BuildError> {
    let n = k as usize + 1;
    let mut ids: Vec<String> = (0..=k).map(|i| i.to_string()).collect();
    ids.push("a".into());
    ids.push("b".into());
    thin_from_leq(&format!("two_infinities_{k}"), ids, move |i, j| {
        if i == j {
            return true;
        }
        if i < n {
            // naturals sit below later naturals and both infinities
            j >= n || i <= j
        } else {
            false // a and b are maximal and incomparable
        }
    })
}

// ---------------------------------------------------------------------------
// Built-in table fixtures
// ---------------------------------------------------------------------------

pub const ONE_SPEC: &str = "category one\nobject x\n";

pub const CHAIN2_SPEC: &str = "\
category chain2
object o0
object o1
arrow u : o0 -> o1
";

/// 2×2 Boolean lattice {bot, a, b, top}.
pub fn make_diamond() -> Result<FinCategory, BuildError> {
    let ids: Vec<String> = ["bot", "a", "b", "top"].iter().map(|s| s.to_string()).collect();
    thin_from_leq("diamond", ids, |i, j| {
        i == j || i == 0 || j == 3
    })
}

/// The five-element modular lattice M3: bottom, three atoms p,q,r, top.
pub fn make_m3() -> Result<FinCategory, BuildError> {
    let ids: Vec<String> = ["bot", "p", "q", "r", "top"].iter().map(|s| s.to_string()).collect();
    thin_from_leq("m3", ids, |i, j| i == j || i == 0 || j == 4)
}

pub fn make_one() -> Result<FinCategory, BuildError> {
    crate::fincat::parse_spec(ONE_SPEC)
        .map_err(|e| BuildError::Invalid(e.to_string()))
        .and_then(make_preorder)
}

pub fn make_chain2() -> Result<FinCategory, BuildError> {
    crate::fincat::parse_spec(CHAIN2_SPEC)
        .map_err(|e| BuildError::Invalid(e.to_string()))
        .and_then(make_preorder)
}

/// The 2-object full-function category on carrier sizes 1 and 2: the
/// smallest deliberately non-thin finite table. Finite table categories
/// admitting weak binary products are necessarily thin, so the weak-product
/// search on this one must refute exhaustively.
pub fn make_nonthin_functions() -> Result<FinCategory, BuildError> {
    let objects = vec![
        ObjectData { id: "1".into(), grade: 1 },
        ObjectData { id: "2".into(), grade: 2 },
    ];
    let sizes = vec![1u32, 2u32];
    let mut declared = Vec::new();
    for (s, &ssize) in sizes.iter().enumerate() {
        for (d, &dsize) in sizes.iter().enumerate() {
            for images in all_maps(ssize, dsize) {
                if s == d && images.iter().enumerate().all(|(i, &x)| x == i as u32) {
                    continue;
                }
                let tag: String = images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
                declared.push(ArrowData {
                    id: format!("m{}to{}_{}", s + 1, d + 1, tag),
                    src: Obj(s),
                    dst: Obj(d),
                    payload: Payload::Map(images),
                });
            }
        }
    }
    FinCategory::assemble(
        "fn12".into(),
        objects,
        declared,
        CompRule::FinSet { sizes },
        true,
        Analytic::None,
    )
}

// ---------------------------------------------------------------------------
// Presheaves over thin handles
// ---------------------------------------------------------------------------

/// A presheaf over a thin handle: carrier sets indexed by objects together
/// with restriction maps along every `x ≤ y` (contravariant).
#[derive(Debug, Clone)]
pub struct Presheaf {
    /// carriers[x] lists the elements over x (as opaque labels).
    pub carriers: Vec<Vec<String>>,
    /// restriction[(x, y)] for x ≤ y maps indices of carriers[y] to indices
    /// of carriers[x], stored per arrow of the base.
    pub restriction: Vec<Option<Vec<u32>>>,
}

impl Presheaf {
    /// Functoriality over the poset: restrictions compose.
    pub fn check_functorial(&self, base: &FinCategory) -> Result<(), String> {
        for a in base.arrows() {
            let r = self.restriction[a.0]
                .as_ref()
                .ok_or_else(|| format!("missing restriction along arrow {}", a.0))?;
            if r.len() != self.carriers[base.dst(a).0].len() {
                return Err(format!("restriction along arrow {} has wrong arity", a.0));
            }
            if r.iter().any(|&i| i as usize >= self.carriers[base.src(a).0].len()) {
                return Err(format!("restriction along arrow {} out of range", a.0));
            }
        }
        for f in base.arrows() {
            for g in base.arrows() {
                if base.dst(f) != base.src(g) {
                    continue;
                }
                let gf = base.compose(g, f);
                let rf = self.restriction[f.0].as_ref().unwrap();
                let rg = self.restriction[g.0].as_ref().unwrap();
                let rgf = self.restriction[gf.0].as_ref().unwrap();
                // contravariance: restrict along gf = restrict along f after g
                for (i, &x) in rgf.iter().enumerate() {
                    if rf[rg[i] as usize] != x {
                        return Err("restrictions do not compose".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Verdict of the representability scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representability {
    Representable(Obj),
    NotRepresentable,
}

/// Pointwise product of the representables `y x × y y` over a thin finite
/// handle, with a representability verdict. Over a thin base the carrier at
/// `z` is a singleton iff `z ≤ x` and `z ≤ y`, so representability amounts
/// to the downset intersection having a maximum.
pub fn representable_product(
    p: &FinCategory,
    x: Obj,
    y: Obj,
) -> Result<(Presheaf, Representability), String> {
    for a in p.objects() {
        for b in p.objects() {
            if p.hom(a, b).len() > 1 {
                return Err("representable_product requires a thin base".into());
            }
        }
    }
    let below = |z: Obj, w: Obj| !p.hom(z, w).is_empty();
    let carriers: Vec<Vec<String>> = p
        .objects()
        .map(|z| {
            if below(z, x) && below(z, y) {
                vec![format!(
                    "({},{})",
                    p.arrow_data(p.hom(z, x)[0]).id,
                    p.arrow_data(p.hom(z, y)[0]).id
                )]
            } else {
                Vec::new()
            }
        })
        .collect();
    let restriction: Vec<Option<Vec<u32>>> = p
        .arrows()
        .map(|a| {
            let (s, d) = (p.src(a), p.dst(a));
            // restriction along s ≤ d maps the (at most one) element over d
            // to the element over s; defined when the carrier over d is
            // nonempty, in which case s ≤ d forces s into the downset too.
            Some(vec![0u32; carriers[d.0].len().min(carriers[s.0].len())])
        })
        .collect();
    let ph = Presheaf {
        carriers,
        restriction,
    };
    // representable by w iff for all z: carrier(z) nonempty ⟺ z ≤ w
    let mut verdict = Representability::NotRepresentable;
    for w in p.objects() {
        if p
            .objects()
            .all(|z| (!ph.carriers[z.0].is_empty()) == below(z, w))
        {
            verdict = Representability::Representable(w);
            break;
        }
    }
    Ok((ph, verdict))
}

// ---------------------------------------------------------------------------
// Fixture registry
// ---------------------------------------------------------------------------

/// A named fixture buildable from the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    One,
    Chain2,
    Diamond,
    M3,
    TwoInfinities { k: u32 },
    FreeGsets { group: Group, cap: u32 },
    FinSet { cap: u32 },
}

impl Fixture {
    /// Parse a fixture token: `one`, `chain2`, `diamond`, `m3`,
    /// `two-infinities:K`, `free-gsets:z2:N`, `finset:N`.
    pub fn parse(token: &str) -> Result<Fixture, String> {
        let parts: Vec<&str> = token.split(':').collect();
        match parts[0] {
            "one" => Ok(Fixture::One),
            "chain2" => Ok(Fixture::Chain2),
            "diamond" => Ok(Fixture::Diamond),
            "m3" => Ok(Fixture::M3),
            "two-infinities" => {
                let k = parts
                    .get(1)
                    .unwrap_or(&"4")
                    .parse::<u32>()
                    .map_err(|_| format!("bad k in `{token}`"))?;
                Ok(Fixture::TwoInfinities { k })
            }
            "free-gsets" => {
                let group = match *parts.get(1).unwrap_or(&"z2") {
                    "z2" => Group::z2(),
                    other => return Err(format!("unknown builtin group `{other}`")),
                };
                let cap = parts
                    .get(2)
                    .unwrap_or(&"2")
                    .parse::<u32>()
                    .map_err(|_| format!("bad cap in `{token}`"))?;
                Ok(Fixture::FreeGsets { group, cap })
            }
            "finset" => {
                let cap = parts
                    .get(1)
                    .unwrap_or(&"3")
                    .parse::<u32>()
                    .map_err(|_| format!("bad cap in `{token}`"))?;
                Ok(Fixture::FinSet { cap })
            }
            other => Err(format!("unknown fixture `{other}`")),
        }
    }

    pub fn build(&self) -> Result<FinCategory, BuildError> {
        match self {
            Fixture::One => make_one(),
            Fixture::Chain2 => make_chain2(),
            Fixture::Diamond => make_diamond(),
            Fixture::M3 => make_m3(),
            Fixture::TwoInfinities { k } => make_two_infinities(*k),
            Fixture::FreeGsets { group, cap } => make_free_gsets(group.clone(), *cap),
            Fixture::FinSet { cap } => make_finset(*cap),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, Arr};

    #[test]
    fn finset_hom_counts() {
        let c = make_finset(3).unwrap();
        assert_eq!(c.object_count(), 4);
        let two = c.object_by_id("2").unwrap();
        assert_eq!(c.hom(two, two).len(), 4);
        let three = c.object_by_id("3").unwrap();
        assert_eq!(c.hom(three, three).len(), 27);
        assert!(!c.exhaustive());
    }

    #[test]
    fn finset_composition_laws_hold() {
        let c = make_finset(3).unwrap();
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn finset_equalizer_of_distinct_constants_is_empty() {
        let c = make_finset(3).unwrap();
        let one = c.object_by_id("1").unwrap();
        let two = c.object_by_id("2").unwrap();
        let maps: Vec<Arr> = c.hom(one, two).to_vec();
        assert_eq!(maps.len(), 2);
        let (e, _inc) = c.analytic_equalizer(maps[0], maps[1]).unwrap();
        assert_eq!(c.object_data(e).id, "0");
    }

    #[test]
    fn free_z2_hom_counts_and_laws() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        assert_eq!(c.object_count(), 3);
        let g = c.object_by_id("G").unwrap();
        assert_eq!(c.hom(g, g).len(), 2);
        let gg = c.object_by_id("2G").unwrap();
        assert_eq!(c.hom(gg, gg).len(), 16);
        assert_eq!(c.hom(g, gg).len(), 4);
        assert!(validate_category(&c).is_ok());
    }

    #[test]
    fn free_z2_analytic_product_is_two_orbits() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let (p, pr1, pr2) = c.analytic_product(g, g).unwrap();
        assert_eq!(c.object_data(p).id, "2G");
        // projections are genuine arrows with the right endpoints
        assert_eq!(c.src(pr1), p);
        assert_eq!(c.dst(pr1), g);
        assert_eq!(c.dst(pr2), g);
    }

    #[test]
    fn free_z2_equalizer_of_distinct_endos_is_empty() {
        let c = make_free_gsets(Group::z2(), 2).unwrap();
        let g = c.object_by_id("G").unwrap();
        let endos: Vec<Arr> = c.hom(g, g).to_vec();
        assert_eq!(endos.len(), 2);
        let (e, _f) = c.analytic_equalizer(endos[0], endos[1]).unwrap();
        assert_eq!(c.object_data(e).id, "0");
    }

    #[test]
    fn two_infinities_shape() {
        let c = make_two_infinities(3).unwrap();
        assert_eq!(c.object_count(), 6);
        assert!(validate_category(&c).is_ok());
        let a = c.object_by_id("a").unwrap();
        let b = c.object_by_id("b").unwrap();
        // a and b incomparable, both above every natural
        assert!(c.hom(a, b).is_empty());
        assert!(c.hom(b, a).is_empty());
        for n in 0..=3u32 {
            let nn = c.object_by_id(&n.to_string()).unwrap();
            assert_eq!(c.hom(nn, a).len(), 1);
            assert_eq!(c.hom(nn, b).len(), 1);
        }
    }

    #[test]
    fn two_infinities_representable_product_is_truncation_top() {
        for k in 0..=6u32 {
            let c = make_two_infinities(k).unwrap();
            let a = c.object_by_id("a").unwrap();
            let b = c.object_by_id("b").unwrap();
            let (ph, verdict) = representable_product(&c, a, b).unwrap();
            ph.check_functorial(&c).unwrap();
            // singleton carrier over every natural, empty over a and b
            for n in 0..=k {
                let nn = c.object_by_id(&n.to_string()).unwrap();
                assert_eq!(ph.carriers[nn.0].len(), 1);
            }
            assert!(ph.carriers[a.0].is_empty());
            assert!(ph.carriers[b.0].is_empty());
            let top = c.object_by_id(&k.to_string()).unwrap();
            assert_eq!(verdict, Representability::Representable(top));
        }
    }

    #[test]
    fn m3_and_diamond_are_valid_lattice_tables() {
        for c in [make_m3().unwrap(), make_diamond().unwrap()] {
            assert!(validate_category(&c).is_ok());
        }
        let m3 = make_m3().unwrap();
        assert_eq!(m3.object_count(), 5);
        assert_eq!(m3.arrow_count(), 5 + 3 + 3 + 1); // ids + bot-to-others + atoms-to-top, bot->top
    }

    #[test]
    fn preorder_rejects_non_thin() {
        let c = make_nonthin_functions().unwrap();
        assert!(make_preorder(c).is_err());
    }

    #[test]
    fn fixture_tokens_parse() {
        assert_eq!(Fixture::parse("m3").unwrap(), Fixture::M3);
        assert_eq!(
            Fixture::parse("two-infinities:5").unwrap(),
            Fixture::TwoInfinities { k: 5 }
        );
        assert_eq!(
            Fixture::parse("finset:3").unwrap(),
            Fixture::FinSet { cap: 3 }
        );
        assert!(Fixture::parse("nonsense").is_err());
    }
}
