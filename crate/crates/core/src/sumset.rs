//! Sumset growth statistics, covering numbers, the Ruzsa covering
//! construction, and empirical Plunnecke-Ruzsa checks.

use crate::error::{Error, Result};
use crate::rat::{rat_pow, rat_usize, Rat};
use crate::set::GroupSet;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub size: usize,
    pub size_square: usize,
    pub size_cube: usize,
    #[serde(with = "crate::rat::rat_serde")]
    pub doubling: Rat,
    #[serde(with = "crate::rat::rat_serde")]
    pub tripling: Rat,
    /// `|A^{+-n}|` for n = 1..=n_max.
    pub pm_sizes: Vec<(u32, usize)>,
    /// `max_{a in A} |AaA|`, the Remark-style alternative growth statistic;
    /// reported only, never used in a bound.
    pub max_sandwich_product: Option<usize>,
}

/// Exact product set; wrapper kept for the module surface.
pub fn product_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.check_same_group(b)?;
    Ok(a.product(b))
}

pub fn growth_report(a: &GroupSet, n_max: u32) -> Result<GrowthReport> {
    if a.is_empty() {
        return Err(Error::input("growth_report on empty set"));
    }
    if n_max < 1 {
        return Err(Error::input("n_max must be >= 1"));
    }
    let a2 = a.product(a);
    let a3 = a2.product(a);
    let mut pm_sizes = Vec::new();
    let sym = a.union(&a.inverse_set());
    let mut ball = GroupSet::singleton(a.group(), a.group().identity()).unwrap();
    for n in 1..=n_max {
        ball = ball.product(&sym);
        let mut with_id = ball.clone();
        with_id.insert(a.group().identity());
        pm_sizes.push((n, with_id.len()));
    }
    let max_sandwich_product = if a.group().is_abelian() {
        None
    } else {
        Some(
            a.iter()
                .map(|x| {
                    let xa = GroupSet::singleton(a.group(), x).unwrap().product(a);
                    a.product(&xa).len()
                })
                .max()
                .unwrap(),
        )
    };
    Ok(GrowthReport {
        size: a.len(),
        size_square: a2.len(),
        size_cube: a3.len(),
        doubling: rat_usize(a2.len()) / rat_usize(a.len()),
        tripling: rat_usize(a3.len()) / rat_usize(a.len()),
        pm_sizes,
        max_sandwich_product,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringResult {
    pub bound: usize,
    pub translates: Vec<u32>,
    pub exact: bool,
}

/// Least number of left translates of `a` needed to cover `x`: greedy by
/// default, exact branch-and-bound when the greedy value is within
/// `exact_limit`. The returned translate list always covers `x`.
pub fn covering_number(x: &GroupSet, a: &GroupSet, exact_limit: usize) -> Result<CoveringResult> {
    x.check_same_group(a)?;
    if a.is_empty() {
        return Err(Error::input("covering_number with empty covering set"));
    }
    if x.is_empty() {
        return Ok(CoveringResult {
            bound: 0,
            translates: Vec::new(),
            exact: true,
        });
    }
    let grp = x.group();
    let translates: Vec<GroupSet> = (0..grp.order() as u32)
        .map(|g| a.translate_left(g))
        .collect();

    // greedy set cover, ties to the smallest translate index
    let mut remaining = x.clone();
    let mut greedy: Vec<u32> = Vec::new();
    while !remaining.is_empty() {
        let best = (0..translates.len())
            .max_by_key(|&g| (translates[g].intersection_size(&remaining), usize::MAX - g))
            .unwrap();
        if translates[best].intersection_size(&remaining) == 0 {
            return Err(Error::Internal("cover cannot make progress".into()));
        }
        greedy.push(best as u32);
        remaining = remaining.difference(&translates[best]);
    }

    let mut result = CoveringResult {
        bound: greedy.len(),
        translates: greedy,
        exact: false,
    };
    if result.bound <= exact_limit {
        if let Some(best) = exact_cover(x, &translates, result.bound) {
            result.bound = best.len();
            result.translates = best;
            result.exact = true;
        } else {
            // greedy already optimal
            result.exact = true;
        }
    }
    verify_cover(x, a, &result.translates)?;
    Ok(result)
}

fn verify_cover(x: &GroupSet, a: &GroupSet, translates: &[u32]) -> Result<()> {
    let mut cov = GroupSet::empty(x.group());
    for &g in translates {
        cov.union_in_place(&a.translate_left(g));
    }
    if x.is_subset(&cov) {
        Ok(())
    } else {
        Err(Error::Internal("cover verification failed".into()))
    }
}

/// Branch and bound for a cover strictly smaller than `upper`; `None` means
/// no improvement exists.
fn exact_cover(x: &GroupSet, translates: &[GroupSet], upper: usize) -> Option<Vec<u32>> {
    // candidate translates that actually intersect x, deduplicated by trace
    let mut cands: Vec<(u32, GroupSet)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (g, t) in translates.iter().enumerate() {
        let trace = t.intersection(x);
        if !trace.is_empty() && seen.insert(trace.elements()) {
            cands.push((g as u32, trace));
        }
    }
    let max_size = cands.iter().map(|(_, t)| t.len()).max().unwrap_or(1);
    let mut best: Option<Vec<u32>> = None;
    let mut budget = upper.saturating_sub(1);
    let mut picks: Vec<u32> = Vec::new();

    fn rec(
        remaining: &GroupSet,
        cands: &[(u32, GroupSet)],
        picks: &mut Vec<u32>,
        budget: &mut usize,
        best: &mut Option<Vec<u32>>,
        max_size: usize,
    ) {
        if remaining.is_empty() {
            *best = Some(picks.clone());
            *budget = picks.len().saturating_sub(1);
            return;
        }
        if picks.len() >= *budget || picks.len() + remaining.len().div_ceil(max_size) > *budget {
            return;
        }
        // branch on the least uncovered point
        let point = remaining.min_element().unwrap();
        let mut options: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].1.contains(point))
            .collect();
        options.sort_by_key(|&i| usize::MAX - cands[i].1.intersection_size(remaining));
        for i in options {
            picks.push(cands[i].0);
            let next = remaining.difference(&cands[i].1);
            rec(&next, cands, picks, budget, best, max_size);
            picks.pop();
        }
    }
    rec(x, &cands, &mut picks, &mut budget, &mut best, max_size);
    best
}

#[derive(Debug, Clone, Serialize)]
pub struct RuzsaCover {
    pub translates: Vec<u32>,
    pub bound: usize,
    pub product_size: usize,
}

/// Greedy maximal family `F <= X` with pairwise disjoint translates `fY`;
/// guarantees `|F| <= floor(|XY|/|Y|)` and `X <= F Y Y^{-1}`, both
/// re-verified before returning.
pub fn ruzsa_cover(x: &GroupSet, y: &GroupSet) -> Result<RuzsaCover> {
    x.check_same_group(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::input("ruzsa_cover on empty set"));
    }
    let mut f: Vec<u32> = Vec::new();
    let mut covered = GroupSet::empty(x.group());
    for g in x.iter() {
        let gy = y.translate_left(g);
        if gy.is_disjoint(&covered) {
            covered.union_in_place(&gy);
            f.push(g);
        }
    }
    let xy = x.product(y);
    let bound = xy.len() / y.len();
    if f.len() > bound {
        return Err(Error::Internal(format!(
            "ruzsa cover size {} exceeds bound {bound}",
            f.len()
        )));
    }
    let yy_inv = y.product(&y.inverse_set());
    let mut hull = GroupSet::empty(x.group());
    for &g in &f {
        hull.union_in_place(&yy_inv.translate_left(g));
    }
    if !x.is_subset(&hull) {
        return Err(Error::Internal("ruzsa cover inclusion failed".into()));
    }
    Ok(RuzsaCover {
        translates: f,
        bound,
        product_size: xy.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PlunneckeCase {
    pub n: u32,
    pub m: u32,
    pub size: usize,
    #[serde(with = "crate::rat::rat_serde")]
    pub bound: Rat,
    pub violated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlunneckeReport {
    #[serde(with = "crate::rat::rat_serde")]
    pub constant: Rat,
    pub abelian: bool,
    pub cases: Vec<PlunneckeCase>,
    pub any_violation: bool,
}

/// For each `(n, m)` compare the exact mixed-sign product size against the
/// Plunnecke-Ruzsa bound: `k^(n+m)|A|` with `k` the doubling ratio in
/// abelian groups, `k^(2(n+m))|A|` with `k` the tripling ratio otherwise.
pub fn plunnecke_check(a: &GroupSet, pairs: &[(u32, u32)]) -> Result<PlunneckeReport> {
    if a.is_empty() {
        return Err(Error::input("plunnecke_check on empty set"));
    }
    let abelian = a.group().is_abelian();
    let constant = if abelian {
        rat_usize(a.product(a).len()) / rat_usize(a.len())
    } else {
        rat_usize(a.product(a).product(a).len()) / rat_usize(a.len())
    };
    let inv = a.inverse_set();
    let mut cases = Vec::new();
    for &(n, m) in pairs {
        let lhs = a.power(n).product(&inv.power(m));
        let exponent = if abelian { n + m } else { 2 * (n + m) };
        let bound = rat_pow(&constant, exponent) * rat_usize(a.len());
        let violated = rat_usize(lhs.len()) > bound.clone();
        cases.push(PlunneckeCase {
            n,
            m,
            size: lhs.len(),
            bound,
            violated,
        });
    }
    let any_violation = cases.iter().any(|c| c.violated);
    Ok(PlunneckeReport {
        constant,
        abelian,
        cases,
        any_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::rat::rat;
    use std::sync::Arc;

    fn z(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(&[n]).unwrap())
    }

    fn interval(g: &Arc<FiniteGroup>, n: u32) -> GroupSet {
        GroupSet::from_elements(g, &(0..n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn growth_of_subgroup_is_flat() {
        let g = z(12);
        let h = GroupSet::from_elements(&g, &[0, 4, 8]).unwrap();
        let r = growth_report(&h, 3).unwrap();
        assert_eq!(r.doubling, rat(1, 1));
        assert_eq!(r.tripling, rat(1, 1));
        assert!(r.pm_sizes.iter().all(|&(_, s)| s == 3));
    }

    #[test]
    fn growth_of_interval() {
        let g = z(100);
        let a = interval(&g, 5);
        let r = growth_report(&a, 2).unwrap();
        assert_eq!(r.size_square, 9);
        assert_eq!(r.doubling, rat(9, 5));
    }

    #[test]
    fn growth_matches_naive_double_loop_oracle() {
        use rand::prelude::*;
        let g = z(64);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let elems: Vec<u32> = (0..64u32).filter(|_| rng.gen_bool(8.0 / 64.0)).collect();
            if elems.is_empty() {
                continue;
            }
            let a = GroupSet::from_elements(&g, &elems).unwrap();
            let r = growth_report(&a, 1).unwrap();
            // independent oracle over plain vectors and a hash set
            let mut sums = std::collections::HashSet::new();
            for &x in &elems {
                for &y in &elems {
                    sums.insert((x + y) % 64);
                }
            }
            assert_eq!(r.size_square, sums.len());
            let mut cubes = std::collections::HashSet::new();
            for &s in &sums {
                for &y in &elems {
                    cubes.insert((s + y) % 64);
                }
            }
            assert_eq!(r.size_cube, cubes.len());
        }
    }

    #[test]
    fn covering_examples() {
        let g = z(12);
        let h = GroupSet::from_elements(&g, &[0, 4, 8]).unwrap();
        let r = covering_number(&h, &h, 8).unwrap();
        assert_eq!(r.bound, 1);

        let g100 = z(100);
        let a = interval(&g100, 2);
        let x = a.product(&a);
        let r = covering_number(&x, &a, 8).unwrap();
        assert_eq!(r.bound, 2);

        let g6 = z(6);
        let r = covering_number(&GroupSet::full(&g6), &interval(&g6, 3), 8).unwrap();
        assert_eq!(r.bound, 2);
    }

    #[test]
    fn covering_volume_lower_bound() {
        let g = z(30);
        let x = GroupSet::from_elements(&g, &[0, 1, 2, 7, 8, 9, 15, 21]).unwrap();
        let a = GroupSet::from_elements(&g, &[0, 3, 6]).unwrap();
        let r = covering_number(&x, &a, 10).unwrap();
        assert!(r.bound >= x.len().div_ceil(a.len()));
    }

    #[test]
    fn ruzsa_cover_examples() {
        let g = z(12);
        let h = GroupSet::from_elements(&g, &[0, 4, 8]).unwrap();
        assert_eq!(ruzsa_cover(&h, &h).unwrap().translates.len(), 1);

        let g100 = z(100);
        let x = interval(&g100, 10);
        let y = interval(&g100, 5);
        let r = ruzsa_cover(&x, &y).unwrap();
        assert!(r.translates.len() <= 2);
        assert_eq!(r.product_size, 14);

        let ident = GroupSet::from_elements(&g100, &[0]).unwrap();
        let r = ruzsa_cover(&x, &ident).unwrap();
        assert_eq!(r.translates.len(), 10);
    }

    #[test]
    fn plunnecke_subgroup_and_interval() {
        let g = z(12);
        let h = GroupSet::from_elements(&g, &[0, 4, 8]).unwrap();
        let rep = plunnecke_check(&h, &[(1, 1), (2, 1)]).unwrap();
        assert!(!rep.any_violation);
        assert!(rep.cases.iter().all(|c| c.size == 3));

        let g100 = z(100);
        let a = interval(&g100, 5);
        let rep = plunnecke_check(&a, &[(2, 1)]).unwrap();
        // 2A - A = {-4..8}, 13 elements, against (9/5)^3 * 5 = 729/25
        assert_eq!(rep.cases[0].size, 13);
        assert_eq!(rep.cases[0].bound, rat(729, 25));
        assert!(!rep.cases[0].violated);
    }
}
