//! Structure of subgroups of finite abelian groups: explicit basis and
//! invariant factors, used to re-encode a subgroup as an abstract group.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::set::GroupSet;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct AbelianDecomposition {
    /// d_1 >= d_2 >= ... with d_{j+1} | d_j; empty for the trivial subgroup
    pub invariant_factors: Vec<u32>,
    /// independent elements with ord(basis[j]) = invariant_factors[j] whose
    /// span is the whole subgroup
    pub basis: Vec<u32>,
}

/// Decompose a subgroup of an abelian group into invariant factors with an
/// explicit basis. The span is re-verified to be a bijection onto the set.
pub fn decompose_subgroup(group: &Arc<FiniteGroup>, set: &GroupSet) -> Result<AbelianDecomposition> {
    if !group.is_abelian() {
        return Err(Error::input("decomposition requires an abelian group"));
    }
    if !crate::subgroup::is_subgroup_set(set) {
        return Err(Error::input("decomposition requires a subgroup"));
    }
    let n = set.len();
    let primes = prime_factors(n as u64);
    // per prime: basis elements sorted by decreasing order
    let mut per_prime: Vec<Vec<(u64, u32)>> = Vec::new();
    for &p in &primes {
        let mut sp = GroupSet::empty(group);
        for x in set.iter() {
            if is_power_of(group.element_order(x)?, p) {
                sp.insert(x);
            }
        }
        let basis = p_group_basis(group, &sp)?;
        per_prime.push(basis);
    }
    // combine across primes into invariant factors, largest first
    let width = per_prime.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut invariant_factors = Vec::new();
    let mut basis = Vec::new();
    for j in 0..width {
        let mut d: u64 = 1;
        let mut g = group.identity();
        for pb in &per_prime {
            if let Some(&(ord, el)) = pb.get(j) {
                d *= ord;
                g = group.op(g, el);
            }
        }
        invariant_factors.push(d as u32);
        basis.push(g);
    }
    // verify the span is a bijection onto the set
    let mut spanned = std::collections::HashSet::new();
    let mut idx = vec![0u64; basis.len()];
    loop {
        let mut x = group.identity();
        for (j, &g) in basis.iter().enumerate() {
            x = group.op(x, group.pow(g, idx[j] as i64));
        }
        if !set.contains(x) || !spanned.insert(x) {
            return Err(Error::Internal("basis span verification failed".into()));
        }
        let mut j = 0;
        loop {
            if j == basis.len() {
                if spanned.len() != n {
                    return Err(Error::Internal("basis does not span the subgroup".into()));
                }
                return Ok(AbelianDecomposition {
                    invariant_factors,
                    basis,
                });
            }
            idx[j] += 1;
            if idx[j] < invariant_factors[j] as u64 {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Basis of a finite abelian p-group by backtracking: extend an independent
/// family in non-increasing element order until it spans; a valid basis
/// always exists, so the search always terminates with one.
fn p_group_basis(group: &Arc<FiniteGroup>, sp: &GroupSet) -> Result<Vec<(u64, u32)>> {
    let target = sp.len();
    let mut elems: Vec<(u64, u32)> = sp
        .iter()
        .map(|x| (group.element_order(x).unwrap(), x))
        .collect();
    elems.sort_by_key(|&(o, x)| (std::cmp::Reverse(o), x));

    fn extend(
        group: &Arc<FiniteGroup>,
        elems: &[(u64, u32)],
        target: usize,
        span: &GroupSet,
        basis: &mut Vec<(u64, u32)>,
        max_ord: u64,
    ) -> bool {
        if span.len() == target {
            return true;
        }
        for &(ord, g) in elems {
            if ord > max_ord || ord < 2 || span.contains(g) {
                continue;
            }
            // independence: the cyclic group of g must meet the span only at 0
            let mut cyc_ok = true;
            let mut x = g;
            while x != group.identity() {
                if span.contains(x) {
                    cyc_ok = false;
                    break;
                }
                x = group.op(x, g);
            }
            if !cyc_ok {
                continue;
            }
            // new span = span + <g>
            let mut new_span = GroupSet::empty(group);
            for s in span.iter() {
                let mut y = s;
                for _ in 0..ord {
                    new_span.insert(y);
                    y = group.op(y, g);
                }
            }
            debug_assert_eq!(new_span.len(), span.len() * ord as usize);
            basis.push((ord, g));
            if extend(group, elems, target, &new_span, basis, ord) {
                return true;
            }
            basis.pop();
        }
        false
    }

    let mut basis = Vec::new();
    let span = GroupSet::singleton(group, group.identity()).unwrap();
    if !extend(group, &elems, target, &span, &mut basis, u64::MAX) {
        return Err(Error::Internal("p-group basis search failed".into()));
    }
    Ok(basis)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

/// Re-encode a subgroup as an abstract abelian group: returns the new group,
/// the element maps in both directions, and the decomposition.
pub struct Reencoding {
    pub group: Arc<FiniteGroup>,
    pub to_new: HashMap<u32, u32>,
    /// new index -> original element of the subgroup
    pub from_new: Vec<u32>,
    pub decomposition: AbelianDecomposition,
}

pub fn reencode_subgroup(group: &Arc<FiniteGroup>, set: &GroupSet) -> Result<Reencoding> {
    let dec = decompose_subgroup(group, set)?;
    let new_group = Arc::new(FiniteGroup::abelian(&dec.invariant_factors)?);
    let mut to_new = HashMap::with_capacity(set.len());
    let mut from_new = vec![0u32; new_group.order()];
    for idx in 0..new_group.order() as u32 {
        let coords = new_group.decode(idx);
        let mut x = group.identity();
        for (j, &c) in coords.iter().enumerate() {
            x = group.op(x, group.pow(dec.basis[j], c as i64));
        }
        if to_new.insert(x, idx).is_some() {
            return Err(Error::Internal("re-encoding is not injective".into()));
        }
        from_new[idx as usize] = x;
    }
    Ok(Reencoding {
        group: new_group,
        to_new,
        from_new,
        decomposition: dec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(moduli: &[u32]) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(moduli).unwrap())
    }

    #[test]
    fn decompose_full_group() {
        let g = grp(&[4, 2]);
        let dec = decompose_subgroup(&g, &GroupSet::full(&g)).unwrap();
        assert_eq!(dec.invariant_factors, vec![4, 2]);
    }

    #[test]
    fn decompose_mixed_subgroup() {
        // subgroup of Z_12 generated by 2: Z_6 = invariant factor [6]
        let g = grp(&[12]);
        let h = crate::subgroup::generate_closure(&g, &[2]).unwrap();
        let dec = decompose_subgroup(&g, h.set()).unwrap();
        assert_eq!(dec.invariant_factors, vec![6]);
    }

    #[test]
    fn decompose_diagonal_in_f2_cube() {
        let g = grp(&[2, 2, 2]);
        // span of (1,1,0) and (0,1,1): order 4, type [2,2]
        let h = crate::subgroup::generate_closure(&g, &[3, 6]).unwrap();
        let dec = decompose_subgroup(&g, h.set()).unwrap();
        assert_eq!(dec.invariant_factors, vec![2, 2]);
    }

    #[test]
    fn decompose_trivial() {
        let g = grp(&[5]);
        let t = crate::subgroup::generate_closure(&g, &[]).unwrap();
        let dec = decompose_subgroup(&g, t.set()).unwrap();
        assert!(dec.invariant_factors.is_empty());
    }

    #[test]
    fn reencode_round_trip() {
        let g = grp(&[8, 3]);
        let h = crate::subgroup::generate_closure(&g, &[2, 8]).unwrap();
        let re = reencode_subgroup(&g, h.set()).unwrap();
        assert_eq!(re.group.order(), h.order());
        // the map must hit every new index exactly once
        let mut seen = std::collections::HashSet::new();
        for x in h.set().iter() {
            assert!(seen.insert(re.to_new[&x]));
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }
}
