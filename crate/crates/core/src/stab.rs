//! Finite epsilon-stabilizers and subgroup extraction.

use crate::error::{Error, Result};
use crate::rat::{rat_usize, Rat};
use crate::set::GroupSet;
use crate::subgroup::{is_subgroup_set, Subgroup};
use crate::vc::Side;
use num_traits::{Signed, Zero};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct StabilizerQuery {
    /// measure-normalizing set A: thresholds are eps * |A|
    pub normalizer: GroupSet,
    pub target: GroupSet,
    pub epsilon: Rat,
    pub side: Side,
}

/// `{g : |gX symdiff X| <= eps |A|}` (left) or with `Xg` (right). The
/// structural laws are re-checked on every call: the result is symmetric and
/// contains the identity; at eps = 0 it is a subgroup; for eps < |X|/|A| it
/// sits inside XX^{-1} (left) or X^{-1}X (right).
pub fn stabilizer(q: &StabilizerQuery) -> Result<GroupSet> {
    q.normalizer.check_same_group(&q.target)?;
    if q.normalizer.is_empty() {
        return Err(Error::input("stabilizer with empty normalizing set"));
    }
    if q.epsilon.is_negative() {
        return Err(Error::input("negative stabilizer threshold"));
    }
    let grp = q.normalizer.group();
    let threshold = &q.epsilon * rat_usize(q.normalizer.len());
    let mut out = GroupSet::empty(grp);
    for g in 0..grp.order() as u32 {
        let moved = match q.side {
            Side::Left => q.target.translate_left(g),
            Side::Right => q.target.translate_right(g),
        };
        if rat_usize(moved.symmetric_difference_size(&q.target)) <= threshold {
            out.insert(g);
        }
    }
    // structural laws from the definitions
    if !out.contains(grp.identity()) || out != out.inverse_set() {
        return Err(Error::Internal("stabilizer lost symmetry".into()));
    }
    if q.epsilon.is_zero() && !is_subgroup_set(&out) {
        return Err(Error::Internal("exact stabilizer is not a subgroup".into()));
    }
    if !q.target.is_empty() {
        let ratio = rat_usize(q.target.len()) / rat_usize(q.normalizer.len());
        if q.epsilon < ratio {
            let hull = match q.side {
                Side::Left => q.target.product(&q.target.inverse_set()),
                Side::Right => q.target.inverse_set().product(&q.target),
            };
            if !out.is_subset(&hull) {
                return Err(Error::Internal(
                    "stabilizer escaped the difference-set hull".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Exact stabilizer subgroup `Stab_{A,0}(A)` in an abelian group, verified
/// equal between the left and right versions.
pub fn gamma_abelian(a: &GroupSet) -> Result<Subgroup> {
    if !a.group().is_abelian() {
        return Err(Error::input(
            "gamma_abelian requires an abelian group; use conjugation_core instead",
        ));
    }
    if a.is_empty() {
        return Err(Error::input("gamma_abelian on empty set"));
    }
    let left = stabilizer(&StabilizerQuery {
        normalizer: a.clone(),
        target: a.clone(),
        epsilon: Rat::zero(),
        side: Side::Left,
    })?;
    let right = stabilizer(&StabilizerQuery {
        normalizer: a.clone(),
        target: a.clone(),
        epsilon: Rat::zero(),
        side: Side::Right,
    })?;
    if left != right {
        return Err(Error::Internal(
            "left and right exact stabilizers differ in an abelian group".into(),
        ));
    }
    Subgroup::from_set(left)
}

/// `cap_{g in <A>} g S g^{-1}`, iterated to a fixpoint; the result is
/// normal in `<A>` and that is verified before returning.
pub fn conjugation_core(a: &GroupSet, s: &Subgroup) -> Result<Subgroup> {
    a.check_same_group(s.set())?;
    let grp = a.group();
    let span = crate::subgroup::generate_closure(grp, &a.elements())?;
    let mut core = s.set().clone();
    loop {
        let mut next = core.clone();
        for g in span.set().iter() {
            let mut conj = GroupSet::empty(grp);
            for h in core.iter() {
                conj.insert(grp.conjugate(g, h));
            }
            next = next.intersection(&conj);
        }
        if next == core {
            break;
        }
        core = next;
    }
    // verify normality within the span
    for g in span.set().iter() {
        for h in core.iter() {
            if !core.contains(grp.conjugate(g, h)) {
                return Err(Error::Internal("conjugation core is not normal".into()));
            }
        }
    }
    Subgroup::from_set(core)
}

/// Largest subgroup contained in a symmetric identity-containing set.
/// Exact when the restricted lattice is enumerable (always at desk scale);
/// the greedy fallback extends by closure-compatible elements largest order
/// first.
pub fn max_subgroup_within(s: &GroupSet) -> Result<Subgroup> {
    let grp = s.group();
    if !s.contains(grp.identity()) {
        return Err(Error::input("max_subgroup_within requires the identity"));
    }
    // fast path: S itself is a subgroup
    if is_subgroup_set(s) {
        return Subgroup::from_set(s.clone());
    }
    if grp.order() <= crate::subgroup::SUBGROUP_ENUM_CAP || grp.is_elementary_two() {
        // exact: enumerate subgroups inside S by restricted closure search
        if let Some(best) = max_subgroup_restricted(s)? {
            return Ok(best);
        }
    }
    greedy_subgroup_within(s)
}

/// BFS over subgroups contained in S: every subgroup of S is reachable from
/// the trivial one by adjoining one element at a time without leaving S.
fn max_subgroup_restricted(s: &GroupSet) -> Result<Option<Subgroup>> {
    let grp = s.group();
    let mut found: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    let mut queue: std::collections::VecDeque<(GroupSet, Vec<u32>)> =
        std::collections::VecDeque::new();
    let trivial = GroupSet::singleton(grp, grp.identity()).unwrap();
    found.insert(trivial.elements());
    queue.push_back((trivial.clone(), Vec::new()));
    let mut best = trivial;
    while let Some((h, gens)) = queue.pop_front() {
        if h.len() > best.len() {
            best = h.clone();
        }
        let mut seen = h.clone();
        for g in s.iter() {
            if seen.contains(g) {
                continue;
            }
            seen.union_in_place(&h.translate_left(g).intersection(s));
            let mut new_gens = gens.clone();
            new_gens.push(g);
            let k = crate::subgroup::closure_set(grp, &new_gens);
            if !k.is_subset(s) {
                continue;
            }
            if found.insert(k.elements()) {
                queue.push_back((k, new_gens));
            }
        }
    }
    Ok(Some(Subgroup::from_set(best)?))
}

fn greedy_subgroup_within(s: &GroupSet) -> Result<Subgroup> {
    let grp = s.group();
    let mut order_of: Vec<(u64, u32)> = s
        .iter()
        .map(|g| (grp.element_order(g).unwrap(), g))
        .collect();
    order_of.sort_by_key(|&(o, g)| (std::cmp::Reverse(o), g));
    let mut gens: Vec<u32> = Vec::new();
    let mut current = GroupSet::singleton(grp, grp.identity()).unwrap();
    for &(_, g) in &order_of {
        if current.contains(g) {
            continue;
        }
        let mut cand = gens.clone();
        cand.push(g);
        let k = crate::subgroup::closure_set(grp, &cand);
        if k.is_subset(s) {
            gens = cand;
            current = k;
        }
    }
    Subgroup::from_set(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::test_groups::s3;
    use crate::group::FiniteGroup;
    use crate::rat::rat;

    fn z(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(&[n]).unwrap())
    }

    fn set(g: &Arc<FiniteGroup>, e: &[u32]) -> GroupSet {
        GroupSet::from_elements(g, e).unwrap()
    }

    fn stab_left(a: &GroupSet, x: &GroupSet, eps: Rat) -> GroupSet {
        stabilizer(&StabilizerQuery {
            normalizer: a.clone(),
            target: x.clone(),
            epsilon: eps,
            side: Side::Left,
        })
        .unwrap()
    }

    #[test]
    fn subgroup_stabilizes_itself() {
        let g = z(12);
        let h = set(&g, &[0, 4, 8]);
        assert_eq!(stab_left(&h, &h, rat(0, 1)), h);
    }

    #[test]
    fn interval_stabilizer_in_z6() {
        let g = z(6);
        let a = set(&g, &[0, 1, 2]);
        assert_eq!(stab_left(&a, &a, rat(0, 1)).elements(), vec![0]);
        assert_eq!(stab_left(&a, &a, rat(2, 3)).elements(), vec![0, 1, 5]);
        // eps >= 2|X|/|A| captures everything
        assert_eq!(stab_left(&a, &a, rat(2, 1)).len(), 6);
    }

    #[test]
    fn stabilizer_monotone_in_eps() {
        let g = z(10);
        let a = set(&g, &[0, 1, 2, 5, 7]);
        let mut prev = stab_left(&a, &a, rat(0, 1));
        for num in 1..=10 {
            let cur = stab_left(&a, &a, rat(num, 5));
            assert!(prev.is_subset(&cur));
            prev = cur;
        }
    }

    #[test]
    fn gamma_abelian_examples() {
        let g = z(6);
        let a = set(&g, &[0, 1, 2]);
        assert_eq!(gamma_abelian(&a).unwrap().set().elements(), vec![0]);
        let full = GroupSet::full(&g);
        assert_eq!(gamma_abelian(&full).unwrap().order(), 6);
        // union of cosets of H contains H in its stabilizer
        let g12 = z(12);
        let union = set(&g12, &[1, 5, 9, 2, 6, 10]);
        let stab = gamma_abelian(&union).unwrap();
        for h in [0u32, 4, 8] {
            assert!(stab.contains(h));
        }
    }

    #[test]
    fn conjugation_core_examples() {
        let g = Arc::new(s3());
        let s = crate::subgroup::generate_closure(&g, &[1]).unwrap();
        let a = GroupSet::full(&g);
        let core = conjugation_core(&a, &s).unwrap();
        assert_eq!(core.order(), 1);

        let normal = crate::subgroup::generate_closure(&g, &[4]).unwrap();
        let core = conjugation_core(&a, &normal).unwrap();
        assert_eq!(core.order(), 3);

        let gz = z(12);
        let h = crate::subgroup::generate_closure(&gz, &[4]).unwrap();
        let az = set(&gz, &[1, 2, 3]);
        let core = conjugation_core(&az, &h).unwrap();
        assert_eq!(core.set(), h.set());
    }

    #[test]
    fn max_subgroup_examples() {
        let g = z(8);
        let full = GroupSet::full(&g);
        assert_eq!(max_subgroup_within(&full).unwrap().order(), 8);

        let s = set(&g, &[0, 2, 6]);
        assert_eq!(max_subgroup_within(&s).unwrap().set().elements(), vec![0]);

        let s2 = set(&g, &[0, 2, 4, 6, 1]);
        assert_eq!(
            max_subgroup_within(&s2).unwrap().set().elements(),
            vec![0, 2, 4, 6]
        );

        assert!(max_subgroup_within(&set(&g, &[1, 2])).is_err());
    }

    #[test]
    fn greedy_fallback_is_valid_and_never_beats_exact() {
        use rand::prelude::*;
        let g = z(24);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let mut elems: Vec<u32> = (1..24).filter(|_| rng.gen_bool(0.4)).collect();
            // make symmetric with identity
            let mut sym: Vec<u32> = elems.iter().map(|&x| (24 - x) % 24).collect();
            elems.append(&mut sym);
            elems.push(0);
            let s = set(&g, &elems);
            let exact = max_subgroup_within(&s).unwrap();
            let greedy = greedy_subgroup_within(&s).unwrap();
            assert!(greedy.set().is_subset(&s));
            assert!(greedy.order() <= exact.order());
            assert!(exact.set().is_subset(&s));
        }
    }
}
