//! VC-dimension, NIP and stability testers for translate set systems,
//! epsilon-approximations, hitting sets, and the translate sandwich.

use crate::error::{Error, Result};
use crate::rat::{rat_usize, Rat};
use crate::set::GroupSet;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const VC_GROUND_CAP: usize = 4096;
pub const OMITS_GROUP_CAP: usize = 256;
pub const OMITS_SIDE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The set system `{gA : g in G}` (or `{Ag}`), optionally restricted to a
/// ground set. Members materialize lazily from `(g, side)`.
#[derive(Debug, Clone)]
pub struct TranslateFamily {
    base: GroupSet,
    side: Side,
    ground: Option<GroupSet>,
}

impl TranslateFamily {
    pub fn left(base: GroupSet) -> Self {
        TranslateFamily {
            base,
            side: Side::Left,
            ground: None,
        }
    }

    pub fn right(base: GroupSet) -> Self {
        TranslateFamily {
            base,
            side: Side::Right,
            ground: None,
        }
    }

    pub fn with_ground(mut self, ground: GroupSet) -> Self {
        self.ground = Some(ground);
        self
    }

    pub fn base(&self) -> &GroupSet {
        &self.base
    }

    pub fn ground_set(&self) -> GroupSet {
        match &self.ground {
            Some(g) => g.clone(),
            None => GroupSet::full(self.base.group()),
        }
    }

    pub fn member(&self, g: u32) -> GroupSet {
        let t = match self.side {
            Side::Left => self.base.translate_left(g),
            Side::Right => self.base.translate_right(g),
        };
        match &self.ground {
            Some(ground) => t.intersection(ground),
            None => t,
        }
    }

    /// Distinct members as ground traces, tagged by a representative translate.
    pub fn family(&self) -> Family {
        let ground = self.ground_set();
        let order = self.base.group().order() as u32;
        let sets: Vec<(u32, GroupSet)> = (0..order).map(|g| (g, self.member(g))).collect();
        Family::from_tagged_sets(&ground, &sets)
    }
}

/// A deduplicated set system over a dense ground of `n` positions.
#[derive(Debug, Clone)]
pub struct Family {
    n: usize,
    members: Vec<Vec<u64>>,
    tags: Vec<u32>,
}

impl Family {
    pub fn from_tagged_sets(ground: &GroupSet, sets: &[(u32, GroupSet)]) -> Family {
        let positions: Vec<u32> = ground.elements();
        let n = positions.len();
        let words = n.div_ceil(64).max(1);
        let mut members = Vec::new();
        let mut tags = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (tag, s) in sets {
            let mut bits = vec![0u64; words];
            for (pos, &el) in positions.iter().enumerate() {
                if s.contains(el) {
                    bits[pos >> 6] |= 1 << (pos & 63);
                }
            }
            if seen.insert(bits.clone()) {
                members.push(bits);
                tags.push(*tag);
            }
        }
        Family { n, members, tags }
    }

    pub fn from_sets(ground: &GroupSet, sets: &[GroupSet]) -> Family {
        let tagged: Vec<(u32, GroupSet)> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32, s.clone()))
            .collect();
        Family::from_tagged_sets(ground, &tagged)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn member_contains(&self, m: usize, pos: usize) -> bool {
        self.members[m][pos >> 6] & (1 << (pos & 63)) != 0
    }

    pub fn tag(&self, m: usize) -> u32 {
        self.tags[m]
    }

    /// Dual system: ground = members, member for each position x is
    /// `{m : x in S_m}`.
    pub fn dual(&self) -> Family {
        let m = self.members.len();
        let words = m.div_ceil(64).max(1);
        let mut members = Vec::new();
        let mut tags = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for pos in 0..self.n {
            let mut bits = vec![0u64; words];
            for idx in 0..m {
                if self.member_contains(idx, pos) {
                    bits[idx >> 6] |= 1 << (idx & 63);
                }
            }
            if seen.insert(bits.clone()) {
                members.push(bits);
                tags.push(pos as u32);
            }
        }
        Family {
            n: m,
            members,
            tags,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VcResult {
    Exact(usize),
    AtLeast(usize),
}

impl VcResult {
    pub fn value(&self) -> usize {
        match self {
            VcResult::Exact(v) | VcResult::AtLeast(v) => *v,
        }
    }
}

/// A shattered point set together with, for every subset pattern, a member
/// tag whose trace realizes it.
#[derive(Debug, Clone, Serialize)]
pub struct ShatterWitness {
    pub points: Vec<u32>,
    /// pattern -> member tag; index into the vec is the subset bitmask
    pub patterns: Vec<u32>,
}

struct ShatterSearch<'a> {
    fam: &'a Family,
    cap: usize,
    best: usize,
    chosen: Vec<usize>,
    best_witness: Option<(Vec<usize>, Vec<usize>)>,
}

impl<'a> ShatterSearch<'a> {
    /// groups: partition of member indices by trace on chosen points; there
    /// are exactly 2^|chosen| groups, indexed by pattern bitmask, all nonempty.
    fn run(&mut self, groups: Vec<Vec<usize>>) {
        if self.chosen.len() > self.best {
            self.best = self.chosen.len();
            self.best_witness = Some((
                self.chosen.clone(),
                groups.iter().map(|g| g[0]).collect(),
            ));
        }
        if self.best >= self.cap {
            return;
        }
        // remaining depth is limited by the smallest group's trace diversity
        let min_group = groups.iter().map(|g| g.len()).min().unwrap_or(0);
        let headroom = usize::BITS as usize - 1 - min_group.leading_zeros() as usize;
        if min_group == 0 || self.chosen.len() + headroom <= self.best {
            return;
        }
        let last = *self.chosen.last().unwrap_or(&usize::MAX);
        // candidate points: those splitting every group; ranked by how evenly
        // they split (sum of min-side sizes, descending)
        let mut cands: Vec<(usize, usize)> = Vec::new();
        'points: for p in 0..self.fam.n {
            if self.chosen.contains(&p) {
                continue;
            }
            // keep a canonical increasing order only when it cannot lose
            // solutions: shattering is order-free, so explore p > last only
            if p <= last && last != usize::MAX {
                continue;
            }
            let mut score = 0usize;
            for g in &groups {
                let with = g.iter().filter(|&&m| self.fam.member_contains(m, p)).count();
                if with == 0 || with == g.len() {
                    continue 'points;
                }
                score += with.min(g.len() - with);
            }
            cands.push((p, score));
        }
        cands.sort_by_key(|&(p, score)| (usize::MAX - score, p));
        for (p, _) in cands {
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(groups.len() * 2);
            for g in &groups {
                let (with, without): (Vec<usize>, Vec<usize>) =
                    g.iter().partition(|&&m| self.fam.member_contains(m, p));
                next.push(without);
                next.push(with);
            }
            self.chosen.push(p);
            self.run(next);
            self.chosen.pop();
            if self.best >= self.cap {
                return;
            }
        }
    }
}

/// Exact VC dimension of a deduplicated family, with a cap: `AtLeast(cap)`
/// is returned as soon as a shattered set of size `cap` is found.
pub fn family_vc(fam: &Family, cap: usize) -> (VcResult, Option<ShatterWitness>) {
    if fam.member_count() == 0 {
        // empty system shatters nothing, not even the empty set
        return (VcResult::Exact(0), None);
    }
    let mut search = ShatterSearch {
        fam,
        cap,
        best: 0,
        chosen: Vec::new(),
        best_witness: None,
    };
    let all: Vec<usize> = (0..fam.member_count()).collect();
    search.run(vec![all]);
    let witness = search.best_witness.map(|(points, members)| {
        // group index bit 0 is the most recently chosen point; re-index so
        // pattern bit i corresponds to points[i]
        let k = points.len();
        let rev = |mask: usize| -> usize {
            let mut out = 0;
            for b in 0..k {
                if mask & (1 << b) != 0 {
                    out |= 1 << (k - 1 - b);
                }
            }
            out
        };
        let patterns: Vec<u32> = (0..members.len())
            .map(|mask| fam.tag(members[rev(mask)]))
            .collect();
        ShatterWitness {
            points: points.iter().map(|&p| p as u32).collect(),
            patterns,
        }
    });
    if search.best >= cap {
        (VcResult::AtLeast(cap), witness)
    } else {
        (VcResult::Exact(search.best), witness)
    }
}

/// VC dimension of a translate family. Ground positions in the witness are
/// translated back to group element indices.
pub fn vc_dimension(family: &TranslateFamily, cap: usize) -> Result<(VcResult, Option<ShatterWitness>)> {
    let ground = family.ground_set();
    if ground.len() > VC_GROUND_CAP {
        return Err(Error::capacity(format!(
            "ground set of size {} exceeds cap {VC_GROUND_CAP}",
            ground.len()
        )));
    }
    let fam = family.family();
    let (res, wit) = family_vc(&fam, cap);
    let positions = ground.elements();
    let wit = wit.map(|w| ShatterWitness {
        points: w.points.iter().map(|&p| positions[p as usize]).collect(),
        patterns: w.patterns,
    });
    Ok((res, wit))
}

#[derive(Debug, Clone, Serialize)]
pub struct NipWitness {
    /// d points shattered by left translates
    pub points: Vec<u32>,
    /// for each subset pattern of the points, a translate realizing it
    pub translates: Vec<u32>,
}

/// `true` iff the left-translate system of `A` has VC dimension < d.
pub fn is_d_nip(a: &GroupSet, d: usize) -> Result<(bool, Option<NipWitness>)> {
    if d < 1 {
        return Err(Error::input("d must be >= 1"));
    }
    let fam = TranslateFamily::left(a.clone());
    let (res, wit) = vc_dimension(&fam, d)?;
    match res {
        VcResult::AtLeast(v) if v >= d => {
            let w = wit.expect("witness accompanies AtLeast");
            // keep only the depth-d witness data
            Ok((
                false,
                Some(NipWitness {
                    points: w.points,
                    translates: w.patterns,
                }),
            ))
        }
        _ => Ok((true, None)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Ladder {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

/// `true` iff no ladder `a_i b_j in A  <=>  i <= j` of height d exists.
/// The search walks a-prefixes keeping the exact candidate set for every b_j
/// that is already fully constrained, plus the running intersection for the
/// unconstrained tail.
pub fn is_d_stable(a: &GroupSet, d: usize) -> Result<(bool, Option<Ladder>)> {
    if d < 1 {
        return Err(Error::input("d must be >= 1"));
    }
    if a.is_empty() {
        return Ok((true, None));
    }
    let grp = a.group();
    let order = grp.order() as u32;
    // v(g) = {x : g x in A} = g^{-1} A
    let rows: Vec<GroupSet> = (0..order).map(|g| a.translate_left(grp.inv(g))).collect();

    // fixed[j] holds the exact candidate set for b_{j+1} given the a-prefix
    // placed so far; common constrains every later b (all of whose known
    // constraints are memberships).
    fn search(
        rows: &[GroupSet],
        d: usize,
        a_prefix: &mut Vec<u32>,
        fixed: &mut Vec<GroupSet>,
        common: &GroupSet,
    ) -> Option<(Vec<u32>, Vec<u32>)> {
        let k = a_prefix.len();
        if k == d {
            let b: Vec<u32> = fixed.iter().map(|c| c.min_element().unwrap()).collect();
            return Some((a_prefix.clone(), b));
        }
        for g in 0..rows.len() as u32 {
            let row = &rows[g as usize];
            // choosing a_{k+1} = g: b_{k+1} needs membership in row, earlier
            // b_j (j <= k) need non-membership
            let new_common = common.intersection(row);
            if new_common.is_empty() {
                continue;
            }
            let mut new_fixed: Vec<GroupSet> = Vec::with_capacity(k + 1);
            let mut ok = true;
            for c in fixed.iter() {
                let nc = c.difference(row);
                if nc.is_empty() {
                    ok = false;
                    break;
                }
                new_fixed.push(nc);
            }
            if !ok {
                continue;
            }
            new_fixed.push(new_common.clone());
            a_prefix.push(g);
            let res = search(rows, d, a_prefix, &mut new_fixed, &new_common);
            a_prefix.pop();
            if res.is_some() {
                return res;
            }
        }
        None
    }

    let full = GroupSet::full(grp);
    let mut prefix = Vec::new();
    let mut fixed = Vec::new();
    if let Some((la, lb)) = search(&rows, d, &mut prefix, &mut fixed, &full) {
        // re-verify the d^2 membership conditions
        for (i, &ai) in la.iter().enumerate() {
            for (j, &bj) in lb.iter().enumerate() {
                let member = a.contains(grp.op(ai, bj));
                if member != (i <= j) {
                    return Err(Error::Internal("ladder verification failed".into()));
                }
            }
        }
        Ok((false, Some(Ladder { a: la, b: lb })))
    } else {
        Ok((true, None))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipartiteGraphSpec {
    pub left: u32,
    pub right: u32,
    /// edges as (left index, right index), 0-based
    pub edges: Vec<(u32, u32)>,
}

impl BipartiteGraphSpec {
    /// ([d], P([d]); in) — the independence-property graph.
    pub fn power_set(d: u32) -> Self {
        let mut edges = Vec::new();
        for s in 0u32..(1 << d) {
            for i in 0..d {
                if s & (1 << i) != 0 {
                    edges.push((i, s));
                }
            }
        }
        BipartiteGraphSpec {
            left: d,
            right: 1 << d,
            edges,
        }
    }

    /// ([n], [n]; <=) — the half graph.
    pub fn half_graph(n: u32) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i..n {
                edges.push((i, j));
            }
        }
        BipartiteGraphSpec {
            left: n,
            right: n,
            edges,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for &(i, j) in &self.edges {
            if i >= self.left || j >= self.right {
                return Err(Error::input("bipartite edge endpoint out of range"));
            }
        }
        Ok(())
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.edges.contains(&(i, j))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OmitsReport {
    pub omits: bool,
    /// (left vertices, right vertices) of an induced copy when present
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
}

/// Does `Gamma_G(A) = (G, G; y x in A)` omit the given graph as an induced
/// subgraph (with distinct vertices on each side)?
pub fn omits_bipartite(a: &GroupSet, spec: &BipartiteGraphSpec) -> Result<OmitsReport> {
    spec.validate()?;
    let grp = a.group();
    let n = grp.order();
    if n > OMITS_GROUP_CAP {
        return Err(Error::capacity(format!(
            "omits_bipartite requires |G| <= {OMITS_GROUP_CAP}"
        )));
    }
    if spec.left as usize > OMITS_SIDE_CAP || spec.right as usize > OMITS_SIDE_CAP {
        return Err(Error::capacity(format!(
            "omits_bipartite caps both sides at {OMITS_SIDE_CAP}; use is_d_nip for the power-set graph"
        )));
    }
    let v = spec.left as usize;
    let w = spec.right as usize;
    // col(x) = {y : y x in A} = A x^{-1}
    let cols: Vec<GroupSet> = (0..n as u32)
        .map(|x| a.translate_right(grp.inv(x)))
        .collect();
    let mut f = vec![0u32; v];
    if let Some(witness) = assign_left(a, spec, &cols, &mut f, 0, v, w) {
        return Ok(OmitsReport {
            omits: false,
            witness: Some(witness),
        });
    }
    Ok(OmitsReport {
        omits: true,
        witness: None,
    })
}

fn assign_left(
    a: &GroupSet,
    spec: &BipartiteGraphSpec,
    cols: &[GroupSet],
    f: &mut Vec<u32>,
    depth: usize,
    v: usize,
    w: usize,
) -> Option<(Vec<u32>, Vec<u32>)> {
    let n = cols.len() as u32;
    if depth == v {
        // candidate sets for each right vertex
        let mut cands: Vec<GroupSet> = Vec::with_capacity(w);
        for j in 0..w as u32 {
            let mut c = GroupSet::full(a.group());
            for i in 0..v as u32 {
                let col = &cols[f[i as usize] as usize];
                c = if spec.has_edge(i, j) {
                    c.intersection(col)
                } else {
                    c.difference(col)
                };
                if c.is_empty() {
                    return None;
                }
            }
            cands.push(c);
        }
        // system of distinct representatives, w <= 3
        let mut h = vec![0u32; w];
        return sdr(&cands, &mut h, 0).map(|hs| (f.clone(), hs));
    }
    for x in 0..n {
        if f[..depth].contains(&x) {
            continue;
        }
        f[depth] = x;
        if let Some(wit) = assign_left(a, spec, cols, f, depth + 1, v, w) {
            return Some(wit);
        }
    }
    None
}

fn sdr(cands: &[GroupSet], h: &mut Vec<u32>, depth: usize) -> Option<Vec<u32>> {
    if depth == cands.len() {
        return Some(h.clone());
    }
    for y in cands[depth].iter() {
        if h[..depth].contains(&y) {
            continue;
        }
        h[depth] = y;
        if let Some(out) = sdr(cands, h, depth + 1) {
            return Some(out);
        }
    }
    None
}

/// The omitted-graph NIP bound `|V| + ceil(log2 |W|)`.
pub fn nip_bound_from_omission(spec: &BipartiteGraphSpec) -> usize {
    let log = if spec.right <= 1 {
        0
    } else {
        (usize::BITS - (spec.right as usize - 1).leading_zeros()) as usize
    };
    spec.left as usize + log
}

/// Exhaustive check that `sample` epsilon-approximates every member of the
/// family: |mu(S) - sample fraction in S| <= eps. This predicate is part of
/// the operation contract, not merely a test helper.
pub fn verify_eps_approximation(fam: &Family, ground_size: usize, sample_positions: &[usize], eps: &Rat) -> bool {
    let n = sample_positions.len();
    for m in 0..fam.member_count() {
        let size = (0..fam.ground_size())
            .filter(|&p| fam.member_contains(m, p))
            .count();
        let mu = rat_usize(size) / rat_usize(ground_size);
        let frac = if n == 0 {
            Rat::from_integer(0.into())
        } else {
            let hits = sample_positions
                .iter()
                .filter(|&&p| fam.member_contains(m, p))
                .count();
            rat_usize(hits) / rat_usize(n)
        };
        let err = if mu >= frac { mu - frac } else { frac - mu };
        if err > *eps {
            return false;
        }
    }
    true
}

/// Sample points (repetition allowed) whose empirical density matches every
/// family member within eps, verified exhaustively before returning.
/// Randomized attempts first; then a deterministic halving chain that starts
/// from the full ground multiset, which is exact.
pub fn eps_approximation(
    family: &TranslateFamily,
    eps: &Rat,
    seed: u64,
) -> Result<Vec<u32>> {
    use num_traits::{Signed, ToPrimitive, Zero};
    if eps.is_negative() || eps.is_zero() {
        return Err(Error::input("eps must be positive"));
    }
    let ground = family.ground_set();
    let positions = ground.elements();
    let gn = positions.len();
    if gn == 0 {
        return Err(Error::input("empty ground set"));
    }
    let fam = family.family();
    if verify_eps_approximation(&fam, gn, &[], eps) {
        return Ok(Vec::new());
    }
    let (vc, _) = family_vc(&fam, 6);
    let d_eff = vc.value().max(1) as f64;
    let eps_f = eps.to_f64().unwrap_or(0.5).max(1e-6);
    let mut target = ((4.0 * d_eff / (eps_f * eps_f))
        * ((4.0 * d_eff / eps_f).ln().max(1.0)))
    .ceil() as usize;
    target = target.clamp(1, 4 * gn);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = target;
    for attempt in 0..24 {
        let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..gn)).collect();
        if verify_eps_approximation(&fam, gn, &sample, eps) {
            return Ok(sample.iter().map(|&p| positions[p]).collect());
        }
        if attempt % 6 == 5 {
            n *= 2;
        }
    }
    // deterministic fallback: halve the exact full-ground sample while the
    // verification keeps passing
    let mut sample: Vec<usize> = (0..gn).collect();
    debug_assert!(verify_eps_approximation(&fam, gn, &sample, eps));
    while sample.len() > target {
        let evens: Vec<usize> = sample.iter().copied().step_by(2).collect();
        let odds: Vec<usize> = sample.iter().copied().skip(1).step_by(2).collect();
        if verify_eps_approximation(&fam, gn, &evens, eps) {
            sample = evens;
        } else if verify_eps_approximation(&fam, gn, &odds, eps) {
            sample = odds;
        } else {
            break;
        }
    }
    if verify_eps_approximation(&fam, gn, &sample, eps) {
        Ok(sample.iter().map(|&p| positions[p]).collect())
    } else {
        Err(Error::Internal(
            "eps-approximation fallback failed verification".into(),
        ))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HittingSet {
    pub points: Vec<u32>,
    /// max(ceil(members / max point degree), greedy disjoint packing)
    pub lower_bound: usize,
}

/// Greedy hitting set over explicit members; every member is verified hit.
pub fn greedy_hitting_set(members: &[GroupSet]) -> Result<HittingSet> {
    if members.is_empty() {
        return Ok(HittingSet {
            points: Vec::new(),
            lower_bound: 0,
        });
    }
    for m in members {
        if m.is_empty() {
            return Err(Error::input("hitting set member is empty"));
        }
        members[0].check_same_group(m)?;
    }
    let grp = members[0].group();
    let order = grp.order() as u32;
    let mut unhit: Vec<usize> = (0..members.len()).collect();
    let mut points = Vec::new();
    while !unhit.is_empty() {
        let mut best = (0usize, u32::MAX);
        for x in 0..order {
            let cover = unhit.iter().filter(|&&m| members[m].contains(x)).count();
            if cover > best.0 {
                best = (cover, x);
            }
        }
        if best.0 == 0 {
            return Err(Error::Internal("hitting set cannot make progress".into()));
        }
        points.push(best.1);
        unhit.retain(|&m| !members[m].contains(best.1));
    }
    for m in members {
        if !points.iter().any(|&x| m.contains(x)) {
            return Err(Error::Internal("hitting set verification failed".into()));
        }
    }
    // fractional-style lower bound: each point hits at most Delta members
    let delta = (0..order)
        .map(|x| members.iter().filter(|m| m.contains(x)).count())
        .max()
        .unwrap_or(1)
        .max(1);
    let degree_bound = members.len().div_ceil(delta);
    // greedy disjoint member packing
    let mut packing = 0usize;
    let mut used = GroupSet::empty(grp);
    for m in members {
        if m.is_disjoint(&used) {
            packing += 1;
            used.union_in_place(m);
        }
    }
    Ok(HittingSet {
        points,
        lower_bound: degree_bound.max(packing),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Sandwich {
    pub e: Vec<u32>,
    pub f: Vec<u32>,
    pub pm2_size: usize,
    pub pm3_size: usize,
}

/// E, F <= A^{+-3} with A^{+-2} <= EA and A^{+-2} <= AF, built by hitting
/// the translate families {Ag} and {gA} for g in A^{+-2} and inverting the
/// hitting sets. Inclusions re-verified exactly.
pub fn nip_sandwich(a: &GroupSet) -> Result<Sandwich> {
    if a.is_empty() {
        return Err(Error::input("nip_sandwich on empty set"));
    }
    let grp = a.group();
    let pm2 = a.pm_ball(2);
    let pm3 = a.pm_ball(3);
    let right_family: Vec<GroupSet> = pm2.iter().map(|g| a.translate_right(g)).collect();
    let e0 = greedy_hitting_set(&right_family)?;
    let e: Vec<u32> = e0.points.iter().map(|&x| grp.inv(x)).collect();
    let left_family: Vec<GroupSet> = pm2.iter().map(|g| a.translate_left(g)).collect();
    let f0 = greedy_hitting_set(&left_family)?;
    let f: Vec<u32> = f0.points.iter().map(|&x| grp.inv(x)).collect();

    let e_set = GroupSet::from_elements(grp, &e)?;
    let f_set = GroupSet::from_elements(grp, &f)?;
    if !e_set.is_subset(&pm3) || !f_set.is_subset(&pm3) {
        return Err(Error::Internal("sandwich sets escaped A^{+-3}".into()));
    }
    if !pm2.is_subset(&e_set.product(a)) {
        return Err(Error::Internal("sandwich EA inclusion failed".into()));
    }
    if !pm2.is_subset(&a.product(&f_set)) {
        return Err(Error::Internal("sandwich AF inclusion failed".into()));
    }
    Ok(Sandwich {
        e,
        f,
        pm2_size: pm2.len(),
        pm3_size: pm3.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VcCalculusReport {
    pub vc_s1: usize,
    pub vc_s2: usize,
    pub vc_complement: usize,
    pub complement_equal: bool,
    pub vc_intersections: usize,
    pub intersections_below_10d: bool,
    pub vc_dual: usize,
    pub dual_below_power: bool,
}

/// Exact checks of the complement / intersection / dual VC laws on small
/// ground sets.
pub fn vc_calculus_check(
    ground: &GroupSet,
    s1: &[GroupSet],
    s2: &[GroupSet],
) -> Result<VcCalculusReport> {
    if ground.len() > 64 {
        return Err(Error::capacity("vc_calculus_check caps ground at 64"));
    }
    let cap = ground.len() + 1;
    let f1 = Family::from_sets(ground, s1);
    let f2 = Family::from_sets(ground, s2);
    let vc_s1 = family_vc(&f1, cap).0.value();
    let vc_s2 = family_vc(&f2, cap).0.value();

    let complements: Vec<GroupSet> = s1.iter().map(|s| ground.difference(s)).collect();
    let fc = Family::from_sets(ground, &complements);
    let vc_complement = family_vc(&fc, cap).0.value();

    let mut inters: Vec<GroupSet> = Vec::new();
    for x in s1 {
        for y in s2 {
            inters.push(x.intersection(y));
        }
    }
    let fi = Family::from_sets(ground, &inters);
    let vc_intersections = family_vc(&fi, cap).0.value();
    let d = vc_s1.max(vc_s2).max(1);

    let dual = f1.dual();
    let vc_dual = family_vc(&dual, f1.member_count() + 1).0.value();

    Ok(VcCalculusReport {
        vc_s1,
        vc_s2,
        vc_complement,
        complement_equal: vc_complement == vc_s1,
        vc_intersections,
        intersections_below_10d: vc_intersections < 10 * d,
        vc_dual,
        dual_below_power: vc_dual < (1usize << (vc_s1 + 1)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslateVcReport {
    pub left_vc: usize,
    pub right_vc: usize,
    /// right_vc <= 2^d for the least d with A d-NIP (d = left_vc + 1)
    pub bound_holds: bool,
}

pub fn translate_vc_check(a: &GroupSet) -> Result<TranslateVcReport> {
    let cap = a.group().order() + 1;
    let left = vc_dimension(&TranslateFamily::left(a.clone()), cap)?.0.value();
    let right = vc_dimension(&TranslateFamily::right(a.clone()), cap)?.0.value();
    let d = left + 1;
    let bound_holds = d < 63 && right <= (1usize << d);
    Ok(TranslateVcReport {
        left_vc: left,
        right_vc: right,
        bound_holds,
    })
}
