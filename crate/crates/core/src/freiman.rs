//! Freiman s-isomorphisms: checking, induced difference maps, the
//! bounded-exponent modeling construction, cuts-out witnesses, and
//! pushforward of coset progressions.

use crate::abelian::{is_prime, reencode_subgroup};
use crate::error::{Error, Result};
use crate::progression::{
    expand_coset_progression, is_proper_coset, CosetProgressionSpec, GapSpec, ProgressionBase,
};
use crate::rat::{rat_usize, Rat};
use crate::set::GroupSet;
use crate::subgroup::Subgroup;
use num_bigint::BigInt;
use std::collections::HashMap;
use std::sync::Arc;

use crate::group::FiniteGroup;

pub const MULTISET_BUDGET: u128 = 20_000_000;
pub const CUTS_OUT_GROUP_CAP: usize = 256;
pub const CUTS_OUT_D_CAP: usize = 3;

/// Explicit bijection between finite subsets of two abelian groups.
#[derive(Debug, Clone)]
pub struct FreimanMap {
    source_group: Arc<FiniteGroup>,
    target_group: Arc<FiniteGroup>,
    pairs: Vec<(u32, u32)>,
    fwd: HashMap<u32, u32>,
    bwd: HashMap<u32, u32>,
}

impl FreimanMap {
    pub fn new(
        source_group: Arc<FiniteGroup>,
        target_group: Arc<FiniteGroup>,
        pairs: Vec<(u32, u32)>,
    ) -> Result<Self> {
        let mut fwd = HashMap::with_capacity(pairs.len());
        let mut bwd = HashMap::with_capacity(pairs.len());
        for &(a, b) in &pairs {
            source_group.check_element(a)?;
            target_group.check_element(b)?;
            if fwd.insert(a, b).is_some() {
                return Err(Error::input(format!("duplicate source element {a}")));
            }
            if bwd.insert(b, a).is_some() {
                return Err(Error::input(format!(
                    "map is not injective: target {b} repeated"
                )));
            }
        }
        Ok(FreimanMap {
            source_group,
            target_group,
            pairs,
            fwd,
            bwd,
        })
    }

    pub fn source_group(&self) -> &Arc<FiniteGroup> {
        &self.source_group
    }

    pub fn target_group(&self) -> &Arc<FiniteGroup> {
        &self.target_group
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, a: u32) -> Option<u32> {
        self.fwd.get(&a).copied()
    }

    pub fn unapply(&self, b: u32) -> Option<u32> {
        self.bwd.get(&b).copied()
    }

    pub fn domain(&self) -> GroupSet {
        let mut s = GroupSet::empty(&self.source_group);
        for &(a, _) in &self.pairs {
            s.insert(a);
        }
        s
    }

    pub fn image(&self) -> GroupSet {
        let mut s = GroupSet::empty(&self.target_group);
        for &(_, b) in &self.pairs {
            s.insert(b);
        }
        s
    }
}

fn multiset_budget(n: usize, s: u32) -> Result<()> {
    let mut count: u128 = 1;
    for i in 0..s as u128 {
        count = count.saturating_mul(n as u128 + i) / (i + 1);
        if count > MULTISET_BUDGET {
            return Err(Error::capacity(format!(
                "{s}-multiset enumeration over {n} elements exceeds the budget"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IsoReport {
    pub is_iso: bool,
    /// two s-tuples violating the equivalence, when not an isomorphism
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
}

/// Equal-sum s-multisets must correspond exactly under the map, in both
/// directions. Multisets are bucketed by sum, so memory stays proportional
/// to the number of distinct sums.
pub fn is_freiman_s_iso(map: &FreimanMap, s: u32) -> Result<IsoReport> {
    if s < 1 {
        return Err(Error::input("s must be >= 1"));
    }
    if !map.source_group.is_abelian() || !map.target_group.is_abelian() {
        return Err(Error::input("freiman isomorphisms are checked on abelian groups"));
    }
    let dom: Vec<u32> = map.domain().elements();
    multiset_budget(dom.len(), s)?;
    // src_sum -> (tgt_sum, representative multiset)
    let mut by_src: HashMap<u32, (u32, Vec<u32>)> = HashMap::new();
    let mut by_tgt: HashMap<u32, (u32, Vec<u32>)> = HashMap::new();
    let src = &map.source_group;
    let tgt = &map.target_group;

    let mut stack: Vec<(usize, u32, u32, Vec<u32>)> =
        vec![(0, src.identity(), tgt.identity(), Vec::new())];
    // depth-first enumeration of multisets (non-decreasing element indices)
    while let Some((start, src_sum, tgt_sum, chosen)) = stack.pop() {
        if chosen.len() == s as usize {
            match by_src.get(&src_sum) {
                None => {
                    by_src.insert(src_sum, (tgt_sum, chosen.clone()));
                }
                Some((t, rep)) => {
                    if *t != tgt_sum {
                        return Ok(IsoReport {
                            is_iso: false,
                            witness: Some((rep.clone(), chosen)),
                        });
                    }
                }
            }
            match by_tgt.get(&tgt_sum) {
                None => {
                    by_tgt.insert(tgt_sum, (src_sum, chosen.clone()));
                }
                Some((ssum, rep)) => {
                    if *ssum != src_sum {
                        return Ok(IsoReport {
                            is_iso: false,
                            witness: Some((rep.clone(), chosen)),
                        });
                    }
                }
            }
            continue;
        }
        for i in start..dom.len() {
            let a = dom[i];
            let b = map.apply(a).unwrap();
            let mut next = chosen.clone();
            next.push(a);
            stack.push((i, src.op(src_sum, a), tgt.op(tgt_sum, b), next));
        }
    }
    Ok(IsoReport {
        is_iso: true,
        witness: None,
    })
}

#[derive(Debug, Clone)]
pub struct InducedMap {
    pub map: FreimanMap,
    /// Freiman level recorded for the induced map: floor(s / (p+q))
    pub level: u32,
}

/// The difference map `psi(a_1+..+a_p - x_1-..-x_q) = phi(a_1)+..-phi(x_q)`
/// on pA - qA, verified well defined fiberwise. `s` is the level the input
/// map is checked at before construction.
pub fn induced_difference_map(map: &FreimanMap, s: u32, p: u32, q: u32) -> Result<InducedMap> {
    if p + q < 1 {
        return Err(Error::input("p + q must be >= 1"));
    }
    let claim = is_freiman_s_iso(map, s)?;
    if !claim.is_iso {
        return Err(Error::input(format!(
            "map is not a Freiman {s}-isomorphism: witness {:?}",
            claim.witness
        )));
    }
    let dom: Vec<u32> = map.domain().elements();
    multiset_budget(dom.len(), p)?;
    multiset_budget(dom.len(), q)?;
    let src = &map.source_group;
    let tgt = &map.target_group;

    // all (sum, image-sum) pairs of k-multisets
    fn sums(
        map: &FreimanMap,
        dom: &[u32],
        k: u32,
    ) -> Vec<(u32, u32, Vec<u32>)> {
        let src = map.source_group();
        let tgt = map.target_group();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, u32, u32, Vec<u32>)> =
            vec![(0, src.identity(), tgt.identity(), Vec::new())];
        while let Some((start, ssum, tsum, chosen)) = stack.pop() {
            if chosen.len() == k as usize {
                out.push((ssum, tsum, chosen));
                continue;
            }
            for i in start..dom.len() {
                let a = dom[i];
                let b = map.apply(a).unwrap();
                let mut next = chosen.clone();
                next.push(a);
                stack.push((i, src.op(ssum, a), tgt.op(tsum, b), next));
            }
        }
        out
    }

    let dedupe = |mut v: Vec<(u32, u32, Vec<u32>)>| -> Vec<(u32, u32, Vec<u32>)> {
        let mut seen = std::collections::HashSet::new();
        v.retain(|(s, t, _)| seen.insert((*s, *t)));
        v
    };
    let plus = dedupe(sums(map, &dom, p));
    let minus = dedupe(sums(map, &dom, q));
    let mut fibers: HashMap<u32, (u32, (Vec<u32>, Vec<u32>))> = HashMap::new();
    for (ps, pt, prep) in &plus {
        for (ms, mt, mrep) in &minus {
            let w_src = src.op(*ps, src.inv(*ms));
            let w_tgt = tgt.op(*pt, tgt.inv(*mt));
            match fibers.get(&w_src) {
                None => {
                    fibers.insert(w_src, (w_tgt, (prep.clone(), mrep.clone())));
                }
                Some((t, (rp, rm))) => {
                    if *t != w_tgt {
                        return Err(Error::NotWellDefined {
                            element: w_src,
                            lhs: format!("plus {rp:?} minus {rm:?} -> {t}"),
                            rhs: format!("plus {prep:?} minus {mrep:?} -> {w_tgt}"),
                        });
                    }
                }
            }
        }
    }
    let pairs: Vec<(u32, u32)> = {
        let mut v: Vec<(u32, u32)> = fibers.iter().map(|(&a, &(b, _))| (a, b)).collect();
        v.sort_unstable();
        v
    };
    let map = FreimanMap::new(Arc::clone(src), Arc::clone(tgt), pairs)?;
    Ok(InducedMap {
        map,
        level: s / (p + q),
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ModelSizeReport {
    pub model_order: usize,
    pub set_size: usize,
    #[serde(with = "crate::rat::rat_serde")]
    pub ratio: Rat,
    /// integer doubling witness ceil(|A+A|/|A|)
    pub doubling_ceiling: u64,
    pub exponent: u64,
    /// k^2 r^(2k^2-2) |A|, when small enough to materialize
    pub bound_general: Option<String>,
    /// (r-1) k^(2s) |A| at s = 4, for prime exponent
    pub bound_prime_s4: Option<String>,
    pub within_general_bound: Option<bool>,
}

#[derive(Debug)]
pub struct Model {
    pub group: Arc<FiniteGroup>,
    pub set: GroupSet,
    pub map: FreimanMap,
    /// group isomorphism part: model index -> element of the generated
    /// subgroup of the source (no translation applied)
    pub iso_to_source: Vec<u32>,
    /// least element of A; the map sends x to iso^{-1}(x - base_point)
    pub base_point: u32,
    pub report: ModelSizeReport,
}

/// Constructive bounded-exponent modeling: translate A by its least element,
/// take the generated subgroup, and re-encode it as an abstract abelian
/// group. The map is a translation composed with a group isomorphism, hence
/// a Freiman s-isomorphism for every s.
pub fn model_bounded_exponent(a: &GroupSet) -> Result<Model> {
    if a.is_empty() {
        return Err(Error::input("model_bounded_exponent on empty set"));
    }
    let grp = a.group();
    if !grp.is_abelian() {
        return Err(Error::input("modeling requires an abelian group"));
    }
    let a0 = a.min_element().unwrap();
    let translated = a.translate_left(grp.inv(a0));
    let span = crate::subgroup::closure_set(grp, &translated.elements());
    let re = reencode_subgroup(grp, &span)?;
    let mut set = GroupSet::empty(&re.group);
    let mut pairs = Vec::with_capacity(a.len());
    for x in a.iter() {
        let shifted = grp.op(x, grp.inv(a0));
        let idx = *re
            .to_new
            .get(&shifted)
            .ok_or_else(|| Error::Internal("translated element escaped the span".into()))?;
        set.insert(idx);
        pairs.push((x, idx));
    }
    let map = FreimanMap::new(Arc::clone(grp), Arc::clone(&re.group), pairs)?;

    let k = rat_usize(a.product(a).len()) / rat_usize(a.len());
    let k_ceil = k.ceil().to_integer().try_into().unwrap_or(u64::MAX);
    let r = grp.exponent();
    let exponent_2k2 = 2u64.saturating_mul(k_ceil.saturating_mul(k_ceil)).saturating_sub(2);
    let bound_general = if exponent_2k2 <= 100_000 {
        let b = BigInt::from(k_ceil).pow(2u32)
            * BigInt::from(r).pow(exponent_2k2 as u32)
            * BigInt::from(a.len());
        Some(b.to_string())
    } else {
        None
    };
    let within_general_bound = bound_general
        .as_ref()
        .map(|b| BigInt::from(re.group.order()) <= b.parse::<BigInt>().unwrap());
    let bound_prime_s4 = if is_prime(r) {
        Some(
            (BigInt::from(r - 1) * BigInt::from(k_ceil).pow(8u32) * BigInt::from(a.len()))
                .to_string(),
        )
    } else {
        None
    };
    let report = ModelSizeReport {
        model_order: re.group.order(),
        set_size: a.len(),
        ratio: rat_usize(re.group.order()) / rat_usize(a.len()),
        doubling_ceiling: k_ceil,
        exponent: r,
        bound_general,
        bound_prime_s4,
        within_general_bound,
    };
    Ok(Model {
        group: re.group,
        set,
        map,
        iso_to_source: re.from_new,
        base_point: a0,
        report,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CutsOutWitness {
    pub points: Vec<u32>,
    /// (subset bitmask, translate g) with x_i in g + A iff bit i set
    pub translates: Vec<(u32, u32)>,
}

/// Witness that A cuts out the family: points x_1..x_d and for each subset S
/// in the family a g_S with `x_i in g_S A  <=>  i in S`.
pub fn cuts_out(a: &GroupSet, d: usize, family: &[u32]) -> Result<Option<CutsOutWitness>> {
    let grp = a.group();
    let n = grp.order();
    if n > CUTS_OUT_GROUP_CAP {
        return Err(Error::capacity(format!(
            "cuts_out caps the group order at {CUTS_OUT_GROUP_CAP}"
        )));
    }
    if d > CUTS_OUT_D_CAP {
        return Err(Error::capacity(format!("cuts_out caps d at {CUTS_OUT_D_CAP}")));
    }
    for &s in family {
        if s >= (1u32 << d) {
            return Err(Error::input("family subset out of range for d"));
        }
    }
    // col(x) = {g : x in gA} = x A^{-1}
    let inv_a = a.inverse_set();
    let cols: Vec<GroupSet> = (0..n as u32)
        .map(|x| inv_a.translate_left(x))
        .collect();
    let mut points = vec![0u32; d];
    fn rec(
        cols: &[GroupSet],
        family: &[u32],
        d: usize,
        depth: usize,
        points: &mut Vec<u32>,
        grp_order: usize,
    ) -> Option<Vec<(u32, u32)>> {
        if depth == d {
            let mut out = Vec::with_capacity(family.len());
            for &s in family {
                let mut cand: Option<GroupSet> = None;
                for i in 0..d {
                    let col = &cols[points[i] as usize];
                    let next = match (&cand, s & (1 << i) != 0) {
                        (None, true) => col.clone(),
                        (None, false) => col.complement(),
                        (Some(c), true) => c.intersection(col),
                        (Some(c), false) => c.difference(col),
                    };
                    if next.is_empty() {
                        return None;
                    }
                    cand = Some(next);
                }
                let cand = match cand {
                    Some(c) => c,
                    // d = 0: any g works for the empty subset
                    None => {
                        let mut full = cols[0].clone();
                        full.union_in_place(&cols[0].complement());
                        full
                    }
                };
                out.push((s, cand.min_element().unwrap()));
            }
            return Some(out);
        }
        for x in 0..grp_order as u32 {
            points[depth] = x;
            if let Some(w) = rec(cols, family, d, depth + 1, points, grp_order) {
                return Some(w);
            }
        }
        None
    }
    Ok(rec(&cols, family, d, 0, &mut points, n).map(|translates| CutsOutWitness {
        points: points.clone(),
        translates,
    }))
}

#[derive(Debug)]
pub struct Pushforward {
    pub spec: CosetProgressionSpec,
    pub source_proper: bool,
    pub image_proper: bool,
}

/// Image of a coset progression under a Freiman 2-isomorphism fixing the
/// identity; verified by expanding both sides.
pub fn pushforward_progression(
    map: &FreimanMap,
    spec: &CosetProgressionSpec,
) -> Result<Pushforward> {
    let src = map.source_group();
    let tgt = map.target_group();
    if map.apply(src.identity()) != Some(tgt.identity()) {
        return Err(Error::input(
            "pushforward requires the map to send identity to identity",
        ));
    }
    let claim = is_freiman_s_iso(map, 2)?;
    if !claim.is_iso {
        return Err(Error::input(format!(
            "map is not a Freiman 2-isomorphism: witness {:?}",
            claim.witness
        )));
    }
    let p_set = expand_coset_progression(spec)?;
    let domain = map.domain();
    if !p_set.is_subset(&domain) {
        return Err(Error::input("progression is not contained in the map domain"));
    }
    let gens: Vec<u32> = spec
        .base
        .generators()
        .iter()
        .map(|&u| {
            map.apply(u)
                .ok_or_else(|| Error::input(format!("generator {u} outside map domain")))
        })
        .collect::<Result<_>>()?;
    let mut h_img = GroupSet::empty(tgt);
    for h in spec.subgroup.set().iter() {
        h_img.insert(
            map.apply(h)
                .ok_or_else(|| Error::input(format!("subgroup element {h} outside map domain")))?,
        );
    }
    let h_sub = Subgroup::from_set(h_img).map_err(|_| {
        Error::input("image of the subgroup part is not a subgroup; the map is not valid on the span")
    })?;
    let image_spec = CosetProgressionSpec::new(
        ProgressionBase::Gap(GapSpec {
            group: Arc::clone(tgt),
            generators: gens,
            lengths: spec.base.lengths().to_vec(),
        }),
        h_sub,
    )?;
    let image_set = expand_coset_progression(&image_spec)?;
    let mut mapped = GroupSet::empty(tgt);
    for x in p_set.iter() {
        mapped.insert(map.apply(x).unwrap());
    }
    if mapped != image_set {
        let witness = mapped
            .symmetric_difference(&image_set)
            .min_element()
            .unwrap();
        return Err(Error::input(format!(
            "pushforward verification failed at element {witness}; the map is not a Freiman 2-isomorphism on the needed span"
        )));
    }
    let source_proper = is_proper_coset(spec)?;
    let image_proper = is_proper_coset(&image_spec)?;
    Ok(Pushforward {
        spec: image_spec,
        source_proper,
        image_proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn z(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(&[n]).unwrap())
    }

    fn set(g: &Arc<FiniteGroup>, e: &[u32]) -> GroupSet {
        GroupSet::from_elements(g, e).unwrap()
    }

    fn translation_map(g: &Arc<FiniteGroup>, elems: &[u32], t: u32) -> FreimanMap {
        let pairs: Vec<(u32, u32)> = elems.iter().map(|&a| (a, g.op(a, t))).collect();
        FreimanMap::new(Arc::clone(g), Arc::clone(g), pairs).unwrap()
    }

    #[test]
    fn translation_is_an_iso_for_every_s() {
        let g = z(40);
        let m = translation_map(&g, &[0, 3, 7, 11, 20], 9);
        for s in 1..=4 {
            assert!(is_freiman_s_iso(&m, s).unwrap().is_iso, "s={s}");
        }
    }

    #[test]
    fn label_identity_between_z10_and_z3_fails_at_s2() {
        let g10 = z(10);
        let g3 = z(3);
        let pairs = vec![(0u32, 0u32), (1, 1), (2, 2)];
        let m = FreimanMap::new(Arc::clone(&g10), Arc::clone(&g3), pairs).unwrap();
        assert!(is_freiman_s_iso(&m, 1).unwrap().is_iso);
        let rep = is_freiman_s_iso(&m, 2).unwrap();
        assert!(!rep.is_iso);
        let (t1, t2) = rep.witness.unwrap();
        // verify the violation honestly: sums differ on one side only
        let sum = |g: &Arc<FiniteGroup>, v: &[u32], f: &dyn Fn(u32) -> u32| {
            v.iter().fold(g.identity(), |acc, &x| g.op(acc, f(x)))
        };
        let id = |x: u32| x;
        let src_eq = sum(&g10, &t1, &id) == sum(&g10, &t2, &id);
        let tgt_eq = sum(&g3, &t1, &id) == sum(&g3, &t2, &id);
        assert_ne!(src_eq, tgt_eq);
    }

    #[test]
    fn any_bijection_is_a_one_iso() {
        let g = z(12);
        let pairs = vec![(0u32, 5u32), (1, 2), (7, 9)];
        let m = FreimanMap::new(Arc::clone(&g), Arc::clone(&g), pairs).unwrap();
        assert!(is_freiman_s_iso(&m, 1).unwrap().is_iso);
    }

    #[test]
    fn induced_difference_map_from_translation() {
        let g = z(50);
        let m = translation_map(&g, &[0, 1, 2, 3, 4], 7);
        let ind = induced_difference_map(&m, 6, 2, 1).unwrap();
        assert_eq!(ind.level, 2);
        // 2A - A = {-4..8}; psi should be the same translation on it
        for x in ind.map.domain().iter() {
            assert_eq!(ind.map.apply(x), Some(g.op(x, 7)));
        }
    }

    #[test]
    fn induced_map_failure_is_reported_with_witnesses() {
        // a 1-iso that is not a 2-iso: dilation-like scramble
        let g = z(9);
        let pairs = vec![(0u32, 0u32), (1, 1), (2, 4), (3, 2)];
        let m = FreimanMap::new(Arc::clone(&g), Arc::clone(&g), pairs).unwrap();
        let err = induced_difference_map(&m, 1, 1, 1).unwrap_err();
        match err {
            Error::NotWellDefined { .. } | Error::Input(_) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn model_of_subgroup_coset_stays_small() {
        let g = Arc::new(FiniteGroup::abelian(&[2; 8]).unwrap());
        // A inside a coset of an 8-element subgroup: span of {e1,e2,e3} + shift
        let h = crate::subgroup::generate_closure(&g, &[1, 2, 4]).unwrap();
        let shift = 128u32;
        let a_elems: Vec<u32> = h.set().iter().take(5).map(|x| g.op(x, shift)).collect();
        let a = set(&g, &a_elems);
        let model = model_bounded_exponent(&a).unwrap();
        assert!(model.group.order() <= 8);
        assert!(is_freiman_s_iso(&model.map, 4).unwrap().is_iso);
        assert!(model.set.contains(model.group.identity()));
    }

    #[test]
    fn model_of_singleton_is_trivial() {
        let g = z(30);
        let a = set(&g, &[17]);
        let model = model_bounded_exponent(&a).unwrap();
        assert_eq!(model.group.order(), 1);
        assert_eq!(model.set.len(), 1);
    }

    #[test]
    fn model_of_full_cube_has_ratio_one() {
        let g = Arc::new(FiniteGroup::abelian(&[2, 2, 2]).unwrap());
        let a = GroupSet::full(&g);
        let model = model_bounded_exponent(&a).unwrap();
        assert_eq!(model.group.order(), 8);
        assert_eq!(model.report.ratio, rat(1, 1));
        // k = 1, r = 2: general bound 1 * 2^0 * 8 = 8
        assert_eq!(model.report.within_general_bound, Some(true));
    }

    #[test]
    fn cuts_out_examples() {
        let g = z(12);
        let a = set(&g, &[0, 1, 5]);
        // the empty family member: witnessed whenever A != G
        let w = cuts_out(&a, 1, &[0]).unwrap().unwrap();
        let (mask, t) = w.translates[0];
        assert_eq!(mask, 0);
        assert!(!a.translate_left(t).contains(w.points[0]));

        // a coset cannot cut out all four subsets of [2]
        let coset = set(&g, &[3, 7, 11]);
        assert!(cuts_out(&coset, 2, &[0, 1, 2, 3]).unwrap().is_none());
        let (nip, _) = crate::vc::is_d_nip(&coset, 2).unwrap();
        assert!(nip);

        // the full group cuts out nothing but the full pattern
        let full = GroupSet::full(&g);
        assert!(cuts_out(&full, 1, &[0]).unwrap().is_none());
        assert!(cuts_out(&full, 1, &[1]).unwrap().is_some());
    }

    #[test]
    fn cuts_out_matches_nip_on_random_sets() {
        use rand::prelude::*;
        let g = z(16);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let all_subsets: Vec<u32> = (0..4).collect();
        for _ in 0..12 {
            let elems: Vec<u32> = (0..16).filter(|_| rng.gen_bool(0.5)).collect();
            if elems.is_empty() {
                continue;
            }
            let a = set(&g, &elems);
            let cut = cuts_out(&a, 2, &all_subsets).unwrap().is_some();
            let (nip, _) = crate::vc::is_d_nip(&a, 2).unwrap();
            assert_eq!(cut, !nip, "A = {elems:?}");
        }
    }

    #[test]
    fn pushforward_translation_free_reencoding() {
        let g = z(100);
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(GapSpec {
                group: Arc::clone(&g),
                generators: vec![1],
                lengths: vec![rat(3, 1)],
            }),
            Subgroup::trivial(&g),
        )
        .unwrap();
        let big: Vec<u32> = (0..100).collect();
        let m = translation_map(&g, &big, 0);
        let push = pushforward_progression(&m, &spec).unwrap();
        assert!(push.source_proper && push.image_proper);
        assert_eq!(
            expand_coset_progression(&push.spec).unwrap(),
            expand_coset_progression(&spec).unwrap()
        );
    }

    #[test]
    fn pushforward_through_model() {
        let g = z(100);
        let a = set(&g, &(0..25).collect::<Vec<_>>());
        let model = model_bounded_exponent(&a).unwrap();
        // P(1;3) lives inside A - min(A) = A here; its image must expand to
        // the mapped set
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(GapSpec {
                group: Arc::clone(&g),
                generators: vec![1],
                lengths: vec![rat(3, 1)],
            }),
            Subgroup::trivial(&g),
        )
        .unwrap();
        let p_set = expand_coset_progression(&spec).unwrap();
        if p_set.is_subset(&model.map.domain()) {
            let push = pushforward_progression(&model.map, &spec).unwrap();
            assert!(push.image_proper);
        }
    }

    #[test]
    fn corrupted_map_fails_pushforward() {
        let g = z(40);
        let big: Vec<u32> = (0..40).collect();
        let mut pairs: Vec<(u32, u32)> = big.iter().map(|&a| (a, a)).collect();
        // swap two targets away from identity-respecting structure
        pairs[3] = (3, 17);
        pairs[17] = (17, 3);
        let m = FreimanMap::new(Arc::clone(&g), Arc::clone(&g), pairs).unwrap();
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(GapSpec {
                group: Arc::clone(&g),
                generators: vec![1],
                lengths: vec![rat(4, 1)],
            }),
            Subgroup::trivial(&g),
        )
        .unwrap();
        assert!(pushforward_progression(&m, &spec).is_err());
    }
}
