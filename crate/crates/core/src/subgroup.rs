//! Subgroups: closure from generators, full lattice enumeration at desk
//! scale, and the coset test.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::set::GroupSet;
use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

pub const SUBGROUP_ENUM_CAP: usize = 512;
pub const ELEMENTARY_TWO_DIM_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    set: GroupSet,
    generators: Vec<u32>,
    normal_in_group: bool,
}

impl Subgroup {
    /// Wrap a set already known to be a subgroup; verifies closure.
    pub fn from_set(set: GroupSet) -> Result<Self> {
        if !is_subgroup_set(&set) {
            return Err(Error::input("set is not a subgroup"));
        }
        let generators = set.elements();
        let normal = is_normal(&set);
        Ok(Subgroup {
            set,
            generators,
            normal_in_group: normal,
        })
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        let set = GroupSet::singleton(group, group.identity()).unwrap();
        Subgroup {
            set,
            generators: Vec::new(),
            normal_in_group: true,
        }
    }

    pub fn set(&self) -> &GroupSet {
        &self.set
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.set.group()
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn is_normal_in_group(&self) -> bool {
        self.normal_in_group
    }

    pub fn contains(&self, g: u32) -> bool {
        self.set.contains(g)
    }

    /// Left coset `g * H` as a set.
    pub fn left_coset(&self, g: u32) -> GroupSet {
        self.set.translate_left(g)
    }
}

/// Identity membership plus closure under the operation and inversion.
pub fn is_subgroup_set(set: &GroupSet) -> bool {
    let grp = set.group();
    if !set.contains(grp.identity()) {
        return false;
    }
    for a in set.iter() {
        if !set.contains(grp.inv(a)) {
            return false;
        }
        for b in set.iter() {
            if !set.contains(grp.op(a, b)) {
                return false;
            }
        }
    }
    true
}

fn is_normal(set: &GroupSet) -> bool {
    let grp = set.group();
    if grp.is_abelian() {
        return true;
    }
    for g in 0..grp.order() as u32 {
        for h in set.iter() {
            if !set.contains(grp.conjugate(g, h)) {
                return false;
            }
        }
    }
    true
}

/// Smallest subgroup containing `gens`; empty input yields the trivial subgroup.
pub fn generate_closure(group: &Arc<FiniteGroup>, gens: &[u32]) -> Result<Subgroup> {
    for &g in gens {
        group.check_element(g)?;
    }
    let set = closure_set(group, gens);
    let normal = is_normal(&set);
    Ok(Subgroup {
        set,
        generators: gens.to_vec(),
        normal_in_group: normal,
    })
}

pub(crate) fn closure_set(group: &Arc<FiniteGroup>, gens: &[u32]) -> GroupSet {
    let mut set = GroupSet::singleton(group, group.identity()).unwrap();
    let mut queue: VecDeque<u32> = VecDeque::new();
    queue.push_back(group.identity());
    let step: Vec<u32> = gens
        .iter()
        .flat_map(|&g| [g, group.inv(g)])
        .collect();
    while let Some(x) = queue.pop_front() {
        for &g in &step {
            let y = group.op(x, g);
            if !set.contains(y) {
                set.insert(y);
                queue.push_back(y);
            }
        }
    }
    set
}

/// The complete subgroup list, deduplicated, sorted by order then by the
/// element list. Elementary abelian 2-groups go through the row-echelon
/// subspace enumerator; everything else uses closure search from the
/// trivial subgroup.
pub fn enumerate_subgroups(group: &Arc<FiniteGroup>, cap: usize) -> Result<Vec<Subgroup>> {
    if group.is_elementary_two() {
        let dim = group.moduli().map(|m| m.len()).unwrap_or(0);
        if dim > ELEMENTARY_TWO_DIM_CAP {
            return Err(Error::capacity(format!(
                "elementary 2-group dimension {dim} exceeds cap {ELEMENTARY_TWO_DIM_CAP}; use a constructive route"
            )));
        }
        return Ok(enumerate_f2_subspaces(group, dim));
    }
    if group.order() > cap {
        return Err(Error::capacity(format!(
            "group order {} exceeds enumeration cap {cap}; use a constructive route",
            group.order()
        )));
    }
    let mut found: HashSet<Vec<u32>> = HashSet::new();
    let mut out: Vec<Subgroup> = Vec::new();
    let mut queue: VecDeque<(GroupSet, Vec<u32>)> = VecDeque::new();
    let trivial = Subgroup::trivial(group);
    found.insert(trivial.set().elements());
    queue.push_back((trivial.set().clone(), Vec::new()));
    out.push(trivial);
    while let Some((h, gens)) = queue.pop_front() {
        if h.len() == group.order() {
            continue;
        }
        // <H, g> = <H, gh> for h in H, so one extension candidate per coset
        let mut seen = h.clone();
        for g in 0..group.order() as u32 {
            if seen.contains(g) {
                continue;
            }
            seen.union_in_place(&h.translate_left(g));
            let mut new_gens = gens.clone();
            new_gens.push(g);
            let k = closure_set(group, &new_gens);
            if found.insert(k.elements()) {
                let normal = is_normal(&k);
                out.push(Subgroup {
                    set: k.clone(),
                    generators: new_gens.clone(),
                    normal_in_group: normal,
                });
                queue.push_back((k, new_gens));
            }
        }
    }
    sort_subgroups(&mut out);
    Ok(out)
}

fn sort_subgroups(subs: &mut [Subgroup]) {
    subs.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.set().elements().cmp(&b.set().elements()))
    });
}

/// All subspaces of F_2^dim via reduced row-echelon generator matrices:
/// one canonical matrix per subspace, so no deduplication is needed.
fn enumerate_f2_subspaces(group: &Arc<FiniteGroup>, dim: usize) -> Vec<Subgroup> {
    let mut out = Vec::new();
    for k in 0..=dim {
        let mut pivots = (0..k).collect::<Vec<usize>>();
        loop {
            // free positions: row i may have arbitrary bits in columns > pivots[i]
            // that are not themselves pivots
            let mut free_positions: Vec<(usize, usize)> = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in (p + 1)..dim {
                    if !pivots.contains(&c) {
                        free_positions.push((i, c));
                    }
                }
            }
            let f = free_positions.len();
            for mask in 0u64..(1u64 << f) {
                let mut rows = vec![0u32; k];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i] |= 1 << p;
                }
                for (bit, &(i, c)) in free_positions.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        rows[i] |= 1 << c;
                    }
                }
                // rows are generator vectors; expand the span
                let mut set = GroupSet::singleton(group, 0).unwrap();
                for combo in 0u32..(1 << k) {
                    let mut v = 0u32;
                    for (i, row) in rows.iter().enumerate() {
                        if combo & (1 << i) != 0 {
                            v ^= row;
                        }
                    }
                    set.insert(v);
                }
                out.push(Subgroup {
                    set,
                    generators: rows.clone(),
                    normal_in_group: true,
                });
            }
            // next pivot combination
            if !next_combination(&mut pivots, dim) {
                break;
            }
        }
    }
    sort_subgroups(&mut out);
    out
}

fn next_combination(combo: &mut Vec<usize>, n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// If `A` is a left coset `gH`, return `(H, g)` with `g` the least element
/// of `A`; otherwise `None`. Empty input is an error.
pub fn is_coset(a: &GroupSet) -> Result<Option<(Subgroup, u32)>> {
    if a.is_empty() {
        return Err(Error::input("is_coset on empty set"));
    }
    let grp = a.group();
    let g = a.min_element().unwrap();
    let h = a.translate_left(grp.inv(g));
    if is_subgroup_set(&h) {
        let sub = Subgroup {
            generators: h.elements(),
            normal_in_group: is_normal(&h),
            set: h,
        };
        Ok(Some((sub, g)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::test_groups::s3;

    fn z(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(&[n]).unwrap())
    }

    #[test]
    fn closure_in_z12() {
        let g = z(12);
        let h = generate_closure(&g, &[4]).unwrap();
        assert_eq!(h.set().elements(), vec![0, 4, 8]);
        let t = generate_closure(&g, &[]).unwrap();
        assert_eq!(t.set().elements(), vec![0]);
    }

    #[test]
    fn s3_generated_by_transposition_and_cycle() {
        let g = Arc::new(s3());
        let h = generate_closure(&g, &[1, 4]).unwrap();
        assert_eq!(h.order(), 6);
    }

    #[test]
    fn subgroup_counts() {
        let z4 = z(4);
        assert_eq!(enumerate_subgroups(&z4, 512).unwrap().len(), 3);
        let v4 = Arc::new(FiniteGroup::abelian(&[2, 2]).unwrap());
        assert_eq!(enumerate_subgroups(&v4, 512).unwrap().len(), 5);
        let f8 = Arc::new(FiniteGroup::abelian(&[2, 2, 2]).unwrap());
        assert_eq!(enumerate_subgroups(&f8, 512).unwrap().len(), 16);
    }

    #[test]
    fn subgroup_count_on_zn_equals_divisor_count() {
        for n in [6u32, 12, 30] {
            let g = z(n);
            let subs = enumerate_subgroups(&g, 512).unwrap();
            let divisors = (1..=n).filter(|d| n % d == 0).count();
            assert_eq!(subs.len(), divisors, "Z_{n}");
            for s in &subs {
                assert!(is_subgroup_set(s.set()));
            }
        }
    }

    #[test]
    fn s3_has_six_subgroups() {
        let g = Arc::new(s3());
        let subs = enumerate_subgroups(&g, 512).unwrap();
        // {e}, three <transposition>, <3-cycle>, S3
        assert_eq!(subs.len(), 6);
        let orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn coset_detection() {
        let g = z(12);
        let a = GroupSet::from_elements(&g, &[3, 7, 11]).unwrap();
        let (h, rep) = is_coset(&a).unwrap().expect("should be a coset");
        assert_eq!(h.set().elements(), vec![0, 4, 8]);
        assert_eq!(rep, 3);

        let b = GroupSet::from_elements(&g, &[0, 1, 3]).unwrap();
        assert!(is_coset(&b).unwrap().is_none());

        let single = GroupSet::from_elements(&g, &[0]).unwrap();
        let (h, rep) = is_coset(&single).unwrap().unwrap();
        assert_eq!(h.order(), 1);
        assert_eq!(rep, 0);

        assert!(is_coset(&GroupSet::empty(&g)).is_err());
    }
}
