//! Bitset-backed subsets of a finite group. All sumset and translate
//! arithmetic runs on these.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct GroupSet {
    group: Arc<FiniteGroup>,
    words: Vec<u64>,
    len: usize,
}

impl PartialEq for GroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.words == other.words
    }
}
impl Eq for GroupSet {}

impl std::hash::Hash for GroupSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.words.hash(state);
    }
}

impl GroupSet {
    pub fn empty(group: &Arc<FiniteGroup>) -> Self {
        let n = group.order();
        GroupSet {
            group: Arc::clone(group),
            words: vec![0u64; n.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(group: &Arc<FiniteGroup>) -> Self {
        let mut s = Self::empty(group);
        let n = group.order();
        for w in 0..s.words.len() {
            s.words[w] = !0u64;
        }
        // clear bits past the order
        let extra = s.words.len() * 64 - n;
        if extra > 0 {
            let last = s.words.len() - 1;
            s.words[last] &= !0u64 >> extra;
        }
        s.len = n;
        s
    }

    pub fn singleton(group: &Arc<FiniteGroup>, g: u32) -> Result<Self> {
        group.check_element(g)?;
        let mut s = Self::empty(group);
        s.insert(g);
        Ok(s)
    }

    pub fn from_elements(group: &Arc<FiniteGroup>, elements: &[u32]) -> Result<Self> {
        let mut s = Self::empty(group);
        for &g in elements {
            group.check_element(g)?;
            s.insert(g);
        }
        Ok(s)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn same_group(&self, other: &GroupSet) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    pub fn check_same_group(&self, other: &GroupSet) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, g: u32) -> bool {
        let i = g as usize;
        i < self.group.order() && self.words[i >> 6] & (1u64 << (i & 63)) != 0
    }

    pub fn insert(&mut self, g: u32) {
        let i = g as usize;
        debug_assert!(i < self.group.order());
        let mask = 1u64 << (i & 63);
        if self.words[i >> 6] & mask == 0 {
            self.words[i >> 6] |= mask;
            self.len += 1;
        }
    }

    pub fn remove(&mut self, g: u32) {
        let i = g as usize;
        let mask = 1u64 << (i & 63);
        if i < self.group.order() && self.words[i >> 6] & mask != 0 {
            self.words[i >> 6] &= !mask;
            self.len -= 1;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some((w * 64) as u32 + b)
                }
            })
        })
    }

    pub fn elements(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> Option<u32> {
        self.iter().next()
    }

    fn recount(&mut self) {
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn union(&self, other: &GroupSet) -> GroupSet {
        debug_assert!(self.same_group(other));
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        out.recount();
        out
    }

    pub fn union_in_place(&mut self, other: &GroupSet) {
        debug_assert!(self.same_group(other));
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.recount();
    }

    pub fn intersection(&self, other: &GroupSet) -> GroupSet {
        debug_assert!(self.same_group(other));
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        out.recount();
        out
    }

    pub fn difference(&self, other: &GroupSet) -> GroupSet {
        debug_assert!(self.same_group(other));
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        out.recount();
        out
    }

    pub fn symmetric_difference(&self, other: &GroupSet) -> GroupSet {
        debug_assert!(self.same_group(other));
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
        out.recount();
        out
    }

    pub fn complement(&self) -> GroupSet {
        GroupSet::full(&self.group).difference(self)
    }

    pub fn is_subset(&self, other: &GroupSet) -> bool {
        debug_assert!(self.same_group(other));
        self.words
            .iter()
            .zip(&other.words)
            .all(|(w, o)| w & !o == 0)
    }

    pub fn is_disjoint(&self, other: &GroupSet) -> bool {
        debug_assert!(self.same_group(other));
        self.words.iter().zip(&other.words).all(|(w, o)| w & o == 0)
    }

    pub fn intersection_size(&self, other: &GroupSet) -> usize {
        debug_assert!(self.same_group(other));
        self.words
            .iter()
            .zip(&other.words)
            .map(|(w, o)| (w & o).count_ones() as usize)
            .sum()
    }

    pub fn symmetric_difference_size(&self, other: &GroupSet) -> usize {
        debug_assert!(self.same_group(other));
        self.words
            .iter()
            .zip(&other.words)
            .map(|(w, o)| (w ^ o).count_ones() as usize)
            .sum()
    }

    /// `gA` for left, computed pointwise.
    pub fn translate_left(&self, g: u32) -> GroupSet {
        let grp = &self.group;
        let mut out = GroupSet::empty(grp);
        for a in self.iter() {
            out.insert(grp.op(g, a));
        }
        out
    }

    /// `Ag`.
    pub fn translate_right(&self, g: u32) -> GroupSet {
        let grp = &self.group;
        let mut out = GroupSet::empty(grp);
        for a in self.iter() {
            out.insert(grp.op(a, g));
        }
        out
    }

    /// `A^{-1}`.
    pub fn inverse_set(&self) -> GroupSet {
        let grp = &self.group;
        let mut out = GroupSet::empty(grp);
        for a in self.iter() {
            out.insert(grp.inv(a));
        }
        out
    }

    pub fn is_symmetric_with_identity(&self) -> bool {
        self.contains(self.group.identity()) && *self == self.inverse_set()
    }

    /// Product set `AB = {ab}`.
    pub fn product(&self, other: &GroupSet) -> GroupSet {
        debug_assert!(self.same_group(other));
        let grp = &self.group;
        let mut out = GroupSet::empty(grp);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(grp.op(a, b));
            }
        }
        out
    }

    /// n-fold product `A^n`; `A^0 = {1}`.
    pub fn power(&self, n: u32) -> GroupSet {
        let mut out = GroupSet::singleton(&self.group, self.group.identity()).unwrap();
        for _ in 0..n {
            out = out.product(self);
        }
        out
    }

    /// `A^{+-n} = (A u A^{-1})^n u {1}`.
    pub fn pm_ball(&self, n: u32) -> GroupSet {
        let sym = self.union(&self.inverse_set());
        let mut out = sym.power(n);
        out.insert(self.group.identity());
        out
    }

    pub fn to_hex(&self) -> String {
        let mut bytes = Vec::with_capacity(self.words.len() * 8);
        for w in &self.words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        while bytes.len() > 1 && bytes.last() == Some(&0) {
            bytes.pop();
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(group: &Arc<FiniteGroup>, hex: &str) -> Result<Self> {
        if hex.len() % 2 != 0 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::input("bitset_hex is not an even-length hex string"));
        }
        let mut s = Self::empty(group);
        for (i, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let byte = u8::from_str_radix(std::str::from_utf8(chunk).unwrap(), 16).unwrap();
            for bit in 0..8 {
                if byte & (1 << bit) != 0 {
                    let idx = (i * 8 + bit) as u32;
                    group.check_element(idx).map_err(|_| {
                        Error::input(format!("bitset_hex sets bit {idx} past group order"))
                    })?;
                    s.insert(idx);
                }
            }
        }
        Ok(s)
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
    fn popcount_tracks_membership() {
        let g = z(100);
        let mut s = GroupSet::empty(&g);
        for x in [3, 14, 15, 92, 65, 3] {
            s.insert(x);
        }
        assert_eq!(s.len(), 5);
        s.remove(14);
        assert_eq!(s.len(), 4);
        assert!(!s.contains(14));
        assert_eq!(s.elements(), vec![3, 15, 65, 92]);
    }

    #[test]
    fn product_set_examples() {
        let g = z(10);
        let a = GroupSet::from_elements(&g, &[0, 1]).unwrap();
        let b = GroupSet::from_elements(&g, &[0, 2]).unwrap();
        assert_eq!(a.product(&b).elements(), vec![0, 1, 2, 3]);
        let empty = GroupSet::empty(&g);
        assert!(empty.product(&a).is_empty());
    }

    #[test]
    fn s3_products_do_not_commute() {
        let g = Arc::new(s3());
        let a = GroupSet::from_elements(&g, &[1]).unwrap(); // a transposition
        let b = GroupSet::from_elements(&g, &[4]).unwrap(); // a 3-cycle
        assert_ne!(a.product(&b), b.product(&a));
    }

    #[test]
    fn pm_ball_matches_direct_expansion() {
        let g = z(100);
        let a = GroupSet::from_elements(&g, &(0..10).collect::<Vec<_>>()).unwrap();
        let ball = a.pm_ball(2);
        // (A u -A)^2 u {0} = {-18..18}
        assert_eq!(ball.len(), 37);
        for x in 0..100u32 {
            let in_ball = (x <= 18) || (x >= 82);
            assert_eq!(ball.contains(x), in_ball, "x={x}");
        }
    }

    #[test]
    fn hex_round_trip() {
        let g = z(70);
        let s = GroupSet::from_elements(&g, &[0, 63, 64, 69]).unwrap();
        let hex = s.to_hex();
        let back = GroupSet::from_hex(&g, &hex).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn full_set_has_exact_order() {
        let g = z(70);
        assert_eq!(GroupSet::full(&g).len(), 70);
        assert_eq!(GroupSet::full(&g).complement().len(), 0);
    }
}
