//! Symbolic progression objects: generalized (arithmetic) progressions,
//! coset (nil)progressions, and Bohr sets, with exact-rational lengths,
//! expansion, properness, normal form, scaling, and the Bohr-side
//! conversions.

use crate::error::{Error, Result};
use crate::rat::{floor_to_i64, rat_int, rat_pow, rat_usize, Rat};
use crate::set::GroupSet;
use crate::subgroup::Subgroup;
use crate::sumset::ruzsa_cover;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

use crate::group::FiniteGroup;

pub const GENERALIZED_RANK_CAP: usize = 3;
pub const GENERALIZED_BUDGET_CAP: i64 = 12;
pub const BOHR_GROUP_CAP: usize = 4096;

/// `{n_1 u_1 + ... + n_r u_r : |n_i| <= L_i}` in an abelian group.
#[derive(Debug, Clone)]
pub struct GapSpec {
    pub group: Arc<FiniteGroup>,
    pub generators: Vec<u32>,
    pub lengths: Vec<Rat>,
}

/// Words in the generators where `x_i` and `x_i^{-1}` together appear at
/// most `L_i` times.
#[derive(Debug, Clone)]
pub struct GeneralizedProgressionSpec {
    pub group: Arc<FiniteGroup>,
    pub generators: Vec<u32>,
    pub lengths: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub enum ProgressionBase {
    Gap(GapSpec),
    Generalized(GeneralizedProgressionSpec),
}

impl ProgressionBase {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            ProgressionBase::Gap(s) => &s.group,
            ProgressionBase::Generalized(s) => &s.group,
        }
    }

    pub fn generators(&self) -> &[u32] {
        match self {
            ProgressionBase::Gap(s) => &s.generators,
            ProgressionBase::Generalized(s) => &s.generators,
        }
    }

    pub fn lengths(&self) -> &[Rat] {
        match self {
            ProgressionBase::Gap(s) => &s.lengths,
            ProgressionBase::Generalized(s) => &s.lengths,
        }
    }

    pub fn lengths_mut(&mut self) -> &mut Vec<Rat> {
        match self {
            ProgressionBase::Gap(s) => &mut s.lengths,
            ProgressionBase::Generalized(s) => &mut s.lengths,
        }
    }

    pub fn rank(&self) -> usize {
        self.generators().len()
    }
}

/// `P_0 * H` with `H` a finite subgroup; nonabelian specs must carry
/// generators normalizing `H`.
#[derive(Debug, Clone)]
pub struct CosetProgressionSpec {
    pub base: ProgressionBase,
    pub subgroup: Subgroup,
    /// declared nilpotence step; validated when claimed
    pub claimed_step: Option<usize>,
}

impl CosetProgressionSpec {
    pub fn new(base: ProgressionBase, subgroup: Subgroup) -> Result<Self> {
        let grp = base.group();
        if !Arc::ptr_eq(grp, subgroup.group()) && **grp != **subgroup.group() {
            return Err(Error::GroupMismatch);
        }
        for &l in base.generators().iter() {
            grp.check_element(l)?;
        }
        if base.lengths().len() != base.generators().len() {
            return Err(Error::input("generators/lengths arity mismatch"));
        }
        if base.lengths().iter().any(|l| l.is_negative()) {
            return Err(Error::input("negative progression length"));
        }
        if matches!(base, ProgressionBase::Gap(_)) && !grp.is_abelian() {
            return Err(Error::input(
                "generalized arithmetic progressions require an abelian group",
            ));
        }
        if !grp.is_abelian() {
            // normalization witness: each generator must normalize H
            for &u in base.generators() {
                for h in subgroup.set().iter() {
                    if !subgroup.set().contains(grp.conjugate(u, h)) {
                        return Err(Error::input(format!(
                            "generator {u} does not normalize the subgroup part"
                        )));
                    }
                }
            }
        }
        Ok(CosetProgressionSpec {
            base,
            subgroup,
            claimed_step: None,
        })
    }

    pub fn with_claimed_step(mut self, s: usize) -> Result<Self> {
        match nilpotence_step(self.base.group(), self.base.generators(), s)? {
            StepResult::Nilpotent(actual) if actual <= s => {
                self.claimed_step = Some(s);
                Ok(self)
            }
            _ => Err(Error::input(format!(
                "generators are not nilpotent of step <= {s}"
            ))),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// Rank-0 spec: the subgroup itself.
    pub fn from_subgroup(subgroup: Subgroup) -> Self {
        let group = Arc::clone(subgroup.group());
        CosetProgressionSpec {
            base: ProgressionBase::Gap(GapSpec {
                group,
                generators: Vec::new(),
                lengths: Vec::new(),
            }),
            subgroup,
            claimed_step: None,
        }
    }
}

/// Bohr set data: each character is one rational per modulus coordinate,
/// its value on that coordinate's generator in R/Z.
#[derive(Debug, Clone)]
pub struct BohrSpec {
    pub group: Arc<FiniteGroup>,
    pub characters: Vec<Vec<Rat>>,
    pub delta: Rat,
}

impl BohrSpec {
    pub fn new(group: Arc<FiniteGroup>, characters: Vec<Vec<Rat>>, delta: Rat) -> Result<Self> {
        let moduli = group
            .moduli()
            .ok_or_else(|| Error::input("bohr spec on nonabelian group"))?
            .to_vec();
        if delta <= Rat::zero() {
            return Err(Error::input("bohr radius must be positive"));
        }
        for ch in &characters {
            if ch.len() != moduli.len() {
                return Err(Error::input("character arity mismatch with moduli"));
            }
            for (q, &m) in ch.iter().zip(&moduli) {
                // the character must be well defined: m * q must be integral
                if !(q * rat_int(m)).is_integer() {
                    return Err(Error::input(format!(
                        "character value {q} is not well defined modulo {m}"
                    )));
                }
            }
        }
        Ok(BohrSpec {
            group,
            characters,
            delta,
        })
    }

    pub fn rank(&self) -> usize {
        self.characters.len()
    }

    pub fn with_delta(&self, delta: Rat) -> BohrSpec {
        BohrSpec {
            group: Arc::clone(&self.group),
            characters: self.characters.clone(),
            delta,
        }
    }

    /// max over coordinates of the arclength distance of tau(x) from 0.
    pub fn distance(&self, x: u32) -> Rat {
        let coords = self.group.decode(x);
        let mut best = Rat::zero();
        for ch in &self.characters {
            let mut v = Rat::zero();
            for (q, &c) in ch.iter().zip(&coords) {
                v += q * rat_int(c);
            }
            // reduce mod 1, take circle distance
            let frac = &v - v.floor();
            let d = std::cmp::min(frac.clone(), Rat::one() - &frac);
            if d > best {
                best = d;
            }
        }
        best
    }
}

fn expansion_budget_check(tuples: &BigInt) -> Result<()> {
    if tuples > &BigInt::from(20_000_000u64) {
        return Err(Error::capacity(format!(
            "progression expansion would enumerate {tuples} tuples"
        )));
    }
    Ok(())
}

/// Exact element set of a GAP, built one generator at a time with bitset sums.
pub fn expand_gap(spec: &GapSpec) -> Result<GroupSet> {
    let grp = &spec.group;
    if !grp.is_abelian() {
        return Err(Error::input(
            "generalized arithmetic progressions require an abelian group",
        ));
    }
    let mut out = GroupSet::singleton(grp, grp.identity()).unwrap();
    for (&u, l) in spec.generators.iter().zip(&spec.lengths) {
        if l.is_negative() {
            return Err(Error::input("negative progression length"));
        }
        let bound = floor_to_i64(l);
        let mut line = GroupSet::empty(grp);
        for n in -bound..=bound {
            line.insert(grp.pow(u, n));
        }
        out = out.product(&line);
    }
    Ok(out)
}

/// Exact element set of a generalized progression via BFS over
/// (element, per-generator usage) states.
pub fn expand_generalized(spec: &GeneralizedProgressionSpec) -> Result<GroupSet> {
    let grp = &spec.group;
    let r = spec.generators.len();
    if r > GENERALIZED_RANK_CAP {
        return Err(Error::capacity(format!(
            "generalized progression rank {r} exceeds cap {GENERALIZED_RANK_CAP}"
        )));
    }
    let budgets: Vec<i64> = spec.lengths.iter().map(floor_to_i64).collect();
    if budgets.iter().any(|&b| b < 0) {
        return Err(Error::input("negative progression length"));
    }
    let total: i64 = budgets.iter().sum();
    if total > GENERALIZED_BUDGET_CAP {
        return Err(Error::capacity(format!(
            "generalized progression budget {total} exceeds cap {GENERALIZED_BUDGET_CAP}"
        )));
    }
    let mut radix = vec![0usize; r];
    let mut states = 1usize;
    for (i, &b) in budgets.iter().enumerate() {
        radix[i] = states;
        states *= (b + 1) as usize;
    }
    let order = grp.order();
    let mut seen = vec![false; order * states];
    let mut out = GroupSet::singleton(grp, grp.identity()).unwrap();
    let start = grp.identity() as usize * states;
    seen[start] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((grp.identity(), vec![0i64; r]));
    while let Some((x, usage)) = queue.pop_front() {
        for i in 0..r {
            if usage[i] >= budgets[i] {
                continue;
            }
            for y in [
                grp.op(x, spec.generators[i]),
                grp.op(x, grp.inv(spec.generators[i])),
            ] {
                let mut nu = usage.clone();
                nu[i] += 1;
                let code: usize = nu
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c as usize * radix[j])
                    .sum();
                let key = y as usize * states + code;
                if !seen[key] {
                    seen[key] = true;
                    out.insert(y);
                    queue.push_back((y, nu));
                }
            }
        }
    }
    Ok(out)
}

pub fn expand_base(base: &ProgressionBase) -> Result<GroupSet> {
    match base {
        ProgressionBase::Gap(s) => expand_gap(s),
        ProgressionBase::Generalized(s) => expand_generalized(s),
    }
}

/// `expand(P_0) * H`, checked symmetric (coset nilprogressions always are).
pub fn expand_coset_progression(spec: &CosetProgressionSpec) -> Result<GroupSet> {
    let p0 = expand_base(&spec.base)?;
    let out = p0.product(spec.subgroup.set());
    if !out.is_symmetric_with_identity() {
        return Err(Error::Internal(
            "expanded coset progression is not symmetric".into(),
        ));
    }
    Ok(out)
}

/// Bohr set elements by exact circle-distance membership.
pub fn expand_bohr(spec: &BohrSpec) -> Result<GroupSet> {
    let grp = &spec.group;
    if grp.order() > BOHR_GROUP_CAP {
        return Err(Error::capacity(format!(
            "bohr expansion caps the group order at {BOHR_GROUP_CAP}"
        )));
    }
    let mut out = GroupSet::empty(grp);
    for x in 0..grp.order() as u32 {
        if spec.distance(x) < spec.delta {
            out.insert(x);
        }
    }
    debug_assert!(out.contains(grp.identity()));
    debug_assert!(out.is_symmetric_with_identity());
    Ok(out)
}

/// Expected size of a proper rank-r GAP: `prod (2 floor(L_i) + 1)`.
pub fn proper_size(lengths: &[Rat]) -> BigInt {
    let mut out = BigInt::one();
    for l in lengths {
        out *= BigInt::from(2 * floor_to_i64(l) + 1);
    }
    out
}

/// A GAP is proper iff the tuple-to-element map is injective, equivalently
/// its size equals `prod (2 floor(L_i) + 1)`. A coset progression is proper
/// iff its progression part is.
pub fn is_proper(base: &ProgressionBase) -> Result<bool> {
    let grp = base.group();
    if !grp.is_abelian() {
        return Err(Error::input("properness is defined for abelian groups"));
    }
    let expected = proper_size(base.lengths());
    expansion_budget_check(&expected)?;
    if expected > BigInt::from(grp.order()) {
        return Ok(false);
    }
    let set = expand_base(base)?;
    Ok(BigInt::from(set.len()) == expected)
}

pub fn is_proper_coset(spec: &CosetProgressionSpec) -> Result<bool> {
    is_proper(&spec.base)
}

/// `P^(eps)`: same generators and subgroup part, lengths scaled exactly.
pub fn scale(spec: &CosetProgressionSpec, eps: &Rat) -> Result<CosetProgressionSpec> {
    if !eps.is_positive() {
        return Err(Error::input("scale factor must be positive"));
    }
    let mut out = spec.clone();
    for l in out.base.lengths_mut() {
        *l *= eps;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum StepResult {
    Nilpotent(usize),
    NotWithinCap,
}

/// Least s with `c_{s+1}(u) = {1}` for the commutator chain
/// `c_1 = {u_i, u_i^{-1}}`, `c_n = {[g,h] : g in c_j, h in c_k, j+k = n}`.
pub fn nilpotence_step(
    group: &Arc<FiniteGroup>,
    generators: &[u32],
    cap: usize,
) -> Result<StepResult> {
    for &g in generators {
        group.check_element(g)?;
    }
    let e = group.identity();
    let mut c1 = GroupSet::empty(group);
    for &g in generators {
        c1.insert(g);
        c1.insert(group.inv(g));
    }
    let trivial = |s: &GroupSet| s.iter().all(|x| x == e);
    let mut chain: Vec<GroupSet> = vec![c1];
    for s in 0..=cap {
        // chain[n-1] holds c_n; ensure c_{s+1} exists
        while chain.len() < s + 1 {
            let n = chain.len() + 1;
            let mut cn = GroupSet::empty(group);
            for j in 1..n {
                let k = n - j;
                for g in chain[j - 1].iter() {
                    for h in chain[k - 1].iter() {
                        cn.insert(group.commutator(g, h));
                    }
                }
            }
            chain.push(cn);
        }
        if trivial(&chain[s]) {
            return Ok(StepResult::Nilpotent(s));
        }
    }
    Ok(StepResult::NotWithinCap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Undefined,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct NormalFormReport {
    pub commutator_condition: Verdict,
    /// (i, j) pairs with a zero-length denominator, reported not guessed
    pub undefined_pairs: Vec<(usize, usize)>,
    pub distinctness_condition: Verdict,
    pub size_condition: Verdict,
    pub quotient_size: usize,
    #[serde(with = "crate::rat::rat_serde")]
    pub size_lower: Rat,
    #[serde(with = "crate::rat::rat_serde")]
    pub size_upper: Rat,
    pub holds: bool,
}

/// Definition-level check of c-normal form, evaluated in the quotient by the
/// subgroup part (H-saturated equality).
pub fn check_c_normal_form(spec: &CosetProgressionSpec, c: u32) -> Result<NormalFormReport> {
    if c < 1 {
        return Err(Error::input("normal form constant must be >= 1"));
    }
    let grp = spec.group();
    let h = spec.subgroup.set();
    let gens = spec.base.generators().to_vec();
    let lengths = spec.base.lengths().to_vec();
    let r = gens.len();
    let cr = rat_int(c);

    // canonical coset representative: least element of x*H
    let coset_canon = |x: u32| -> u32 { h.iter().map(|e| grp.op(x, e)).min().unwrap() };

    // (i) commutators of earlier generators land in the progression on the
    // later generators with budgets c L_t / (L_i L_j), mod H
    let mut commutator_condition = Verdict::Pass;
    let mut undefined_pairs = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            if lengths[i].is_zero() || lengths[j].is_zero() {
                undefined_pairs.push((i, j));
                continue;
            }
            let denom = &lengths[i] * &lengths[j];
            let tail_gens: Vec<u32> = gens[(j + 1)..].to_vec();
            let tail_lengths: Vec<Rat> = lengths[(j + 1)..]
                .iter()
                .map(|l| &cr * l / denom.clone())
                .collect();
            let target = if tail_gens.is_empty() {
                GroupSet::singleton(grp, grp.identity()).unwrap()
            } else {
                let tail = GeneralizedProgressionSpec {
                    group: Arc::clone(grp),
                    generators: tail_gens,
                    lengths: tail_lengths,
                };
                expand_generalized(&tail)?
            };
            let saturated = target.product(h);
            let (ui, uj) = (gens[i], gens[j]);
            for a in [ui, grp.inv(ui)] {
                for b in [uj, grp.inv(uj)] {
                    if !saturated.contains(grp.commutator(a, b)) {
                        commutator_condition = Verdict::Fail;
                    }
                }
            }
        }
    }
    if commutator_condition == Verdict::Pass && !undefined_pairs.is_empty() && r >= 2 {
        commutator_condition = Verdict::Undefined;
    }

    // (ii) ordered power products u_1^{n_1} ... u_r^{n_r} distinct mod H for
    // |n_i| <= L_i / c
    let inner_bounds: Vec<i64> = lengths.iter().map(|l| floor_to_i64(&(l / &cr))).collect();
    let tuple_count: BigInt = inner_bounds
        .iter()
        .map(|&b| BigInt::from(2 * b + 1))
        .product();
    expansion_budget_check(&tuple_count)?;
    let mut seen = std::collections::HashSet::new();
    let mut distinctness_condition = Verdict::Pass;
    let mut tuple = vec![0i64; r];
    'outer: loop {
        let mut x = grp.identity();
        for (idx, &n) in tuple.iter().enumerate() {
            x = grp.op(x, grp.pow(gens[idx], n));
        }
        if !seen.insert(coset_canon(x)) {
            distinctness_condition = Verdict::Fail;
        }
        // next tuple
        let mut idx = 0;
        loop {
            if idx == r {
                break 'outer;
            }
            if tuple[idx] < inner_bounds[idx] {
                tuple[idx] += 1;
                break;
            }
            tuple[idx] = -inner_bounds[idx];
            idx += 1;
        }
    }

    // (iii) size sandwich in the quotient
    let full = expand_coset_progression(spec)?;
    let quotient_size = full.len() / h.len();
    let prod = Rat::from_integer(proper_size(&lengths));
    let size_lower = prod.clone() / cr.clone();
    let size_upper = prod * cr;
    let qs = rat_usize(quotient_size);
    let size_condition = if qs >= size_lower && qs <= size_upper {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let holds = commutator_condition != Verdict::Fail
        && distinctness_condition == Verdict::Pass
        && size_condition == Verdict::Pass;
    Ok(NormalFormReport {
        commutator_condition,
        undefined_pairs,
        distinctness_condition,
        size_condition,
        quotient_size,
        size_lower,
        size_upper,
        holds,
    })
}

#[derive(Debug, Clone)]
pub struct BohrProgressionWitness {
    pub spec: CosetProgressionSpec,
    pub rank: usize,
    pub inner_size: usize,
    pub outer_size: usize,
    pub progression_size: usize,
}

/// Search for a proper coset progression P of rank s <= rank(B) with
/// `B(s^{-2s} delta) <= P <= B(delta)`, generators drawn from B in order of
/// Bohr distance, lengths maximal proper. The output is verified by
/// expansion before being returned; the biggest verified P wins, with ties
/// to lower rank.
pub fn bohr_to_proper_progression(spec: &BohrSpec) -> Result<BohrProgressionWitness> {
    let grp = &spec.group;
    if spec.rank() > 2 {
        return Err(Error::capacity(
            "bohr-to-progression search is capped at rank 2",
        ));
    }
    let outer = expand_bohr(spec)?;
    // kernel of tau: exact annihilator, always inside B
    let mut kernel_set = GroupSet::empty(grp);
    for x in 0..grp.order() as u32 {
        if spec.distance(x).is_zero() {
            kernel_set.insert(x);
        }
    }
    let kernel = Subgroup::from_set(kernel_set.clone())
        .map_err(|_| Error::Internal("bohr kernel is not a subgroup".into()))?;

    let mut best: Option<BohrProgressionWitness> = None;
    let mut consider = |cand: CosetProgressionSpec, inner: &GroupSet| -> Result<()> {
        let p = expand_coset_progression(&cand)?;
        if !inner.is_subset(&p) || !p.is_subset(&outer) {
            return Ok(());
        }
        if !is_proper_coset(&cand)? {
            return Ok(());
        }
        let w = BohrProgressionWitness {
            rank: cand.rank(),
            inner_size: inner.len(),
            outer_size: outer.len(),
            progression_size: p.len(),
            spec: cand,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                (w.progression_size, std::cmp::Reverse(w.rank))
                    > (b.progression_size, std::cmp::Reverse(b.rank))
            }
        };
        if better {
            best = Some(w);
        }
        Ok(())
    };

    // rank 0: B itself must be a subgroup (the sandwich factor is 1)
    if crate::subgroup::is_subgroup_set(&outer) {
        let sub = Subgroup::from_set(outer.clone()).unwrap();
        consider(CosetProgressionSpec::from_subgroup(sub), &outer)?;
    }

    // candidate generators by Bohr distance
    let mut cands: Vec<u32> = outer.iter().filter(|&x| !kernel_set.contains(x)).collect();
    cands.sort_by_key(|&x| (spec.distance(x), x));
    cands.truncate(16);

    // rank 1: the factor is 1, so expand(P) must equal B exactly
    for &u in &cands {
        let l = max_proper_length(grp, u, &kernel_set, &outer);
        if l < 0 {
            continue;
        }
        let cand = CosetProgressionSpec::new(
            ProgressionBase::Gap(GapSpec {
                group: Arc::clone(grp),
                generators: vec![u],
                lengths: vec![rat_int(l)],
            }),
            kernel.clone(),
        )?;
        consider(cand, &outer)?;
    }

    // rank 2 with inner radius delta/16
    if spec.rank() >= 2 {
        let inner = expand_bohr(&spec.with_delta(&spec.delta / rat_int(16)))?;
        for (ai, &u1) in cands.iter().enumerate() {
            for &u2 in cands.iter().skip(ai + 1) {
                for (first, second) in [(u1, u2), (u2, u1)] {
                    let l1 = max_proper_length(grp, first, &kernel_set, &outer);
                    if l1 < 0 {
                        continue;
                    }
                    let mut line = GroupSet::empty(grp);
                    for n in -l1..=l1 {
                        line.insert(grp.pow(first, n));
                    }
                    let l2 = max_proper_length_given(grp, second, &kernel_set, &outer, &line);
                    if l2 < 0 {
                        continue;
                    }
                    let cand = CosetProgressionSpec::new(
                        ProgressionBase::Gap(GapSpec {
                            group: Arc::clone(grp),
                            generators: vec![first, second],
                            lengths: vec![rat_int(l1), rat_int(l2)],
                        }),
                        kernel.clone(),
                    )?;
                    consider(cand, &inner)?;
                }
            }
        }
    }

    best.ok_or_else(|| {
        Error::SearchFailure(format!(
            "no proper coset progression witness found: rank {}, delta {}, |B| = {}",
            spec.rank(),
            crate::rat::rat_to_string(&spec.delta),
            outer.len()
        ))
    })
}

/// Largest L such that `{n u : |n| <= L}` is proper (distinct in G) and
/// `{n u} + K` stays inside `outer`; -1 when even L = 0 fails.
fn max_proper_length(grp: &Arc<FiniteGroup>, u: u32, kernel: &GroupSet, outer: &GroupSet) -> i64 {
    let unit = GroupSet::singleton(grp, grp.identity()).unwrap();
    max_proper_length_given(grp, u, kernel, outer, &unit)
}

/// Same, against an existing proper progression `line`: properness of the
/// pair means all sums n1*prev + n2*u stay distinct.
fn max_proper_length_given(
    grp: &Arc<FiniteGroup>,
    u: u32,
    kernel: &GroupSet,
    outer: &GroupSet,
    line: &GroupSet,
) -> i64 {
    if !line.product(kernel).is_subset(outer) {
        return -1;
    }
    let mut seen = line.clone();
    let mut l: i64 = 0;
    loop {
        let next = l + 1;
        let mut new_elems = GroupSet::empty(grp);
        for s in [grp.pow(u, next), grp.pow(u, -next)] {
            for x in line.iter() {
                new_elems.insert(grp.op(x, s));
            }
        }
        // properness: the new layers must be full-size and disjoint from
        // everything seen
        if !new_elems.is_disjoint(&seen)
            || new_elems.len() != 2 * line.len()
            || !new_elems.product(kernel).is_subset(outer)
        {
            return l;
        }
        seen.union_in_place(&new_elems);
        l = next;
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BohrCover {
    pub points: Vec<u32>,
    #[serde(with = "crate::rat::rat_serde")]
    pub bound: Rat,
    pub within_bound: bool,
}

/// X <= A with A <= X + B, via the Ruzsa cover against the half-radius Bohr
/// set (B(d/2) + B(d/2) <= B(d)); the inclusion is verified exactly and |X|
/// is compared against (2/delta)^r.
pub fn bohr_cover(a: &GroupSet, spec: &BohrSpec) -> Result<BohrCover> {
    if a.is_empty() {
        return Err(Error::input("bohr_cover on empty set"));
    }
    if !a.same_group(&GroupSet::empty(&spec.group)) {
        return Err(Error::GroupMismatch);
    }
    let half = expand_bohr(&spec.with_delta(&spec.delta / rat_int(2)))?;
    let cover = ruzsa_cover(a, &half)?;
    let b = expand_bohr(spec)?;
    let mut hull = GroupSet::empty(a.group());
    for &x in &cover.translates {
        hull.union_in_place(&b.translate_left(x));
    }
    if !a.is_subset(&hull) {
        return Err(Error::Internal("bohr cover inclusion failed".into()));
    }
    let bound = rat_pow(&(rat_int(2) / &spec.delta), spec.rank() as u32);
    let within_bound = rat_usize(cover.translates.len()) <= bound;
    Ok(BohrCover {
        points: cover.translates,
        bound,
        within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::test_groups::{heisenberg3, s3};
    use crate::rat::rat;

    fn z(n: u32) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::abelian(&[n]).unwrap())
    }

    fn gap(g: &Arc<FiniteGroup>, gens: &[u32], lens: &[i64]) -> GapSpec {
        GapSpec {
            group: Arc::clone(g),
            generators: gens.to_vec(),
            lengths: lens.iter().map(|&l| rat(l, 1)).collect(),
        }
    }

    #[test]
    fn gap_expansion_in_z20() {
        let g = z(20);
        let p = expand_gap(&gap(&g, &[3], &[2])).unwrap();
        assert_eq!(p.elements(), vec![0, 3, 6, 14, 17]);
    }

    #[test]
    fn bohr_expansion_examples() {
        let g5 = z(5);
        let b = BohrSpec::new(Arc::clone(&g5), vec![vec![rat(1, 5)]], rat(3, 10)).unwrap();
        assert_eq!(expand_bohr(&b).unwrap().elements(), vec![0, 1, 4]);

        let wide = BohrSpec::new(Arc::clone(&g5), vec![vec![rat(1, 5)]], rat(3, 5)).unwrap();
        assert_eq!(expand_bohr(&wide).unwrap().len(), 5);

        let g12 = z(12);
        let b12 = BohrSpec::new(Arc::clone(&g12), vec![vec![rat(1, 12)]], rat(3, 10)).unwrap();
        assert_eq!(
            expand_bohr(&b12).unwrap().elements(),
            vec![0, 1, 2, 3, 9, 10, 11]
        );
    }

    #[test]
    fn properness_examples() {
        let g = z(10);
        let proper = ProgressionBase::Gap(gap(&g, &[1], &[3]));
        assert!(is_proper(&proper).unwrap());
        assert_eq!(expand_base(&proper).unwrap().len(), 7);

        let improper = ProgressionBase::Gap(gap(&g, &[2], &[3]));
        assert!(!is_proper(&improper).unwrap());

        let rank0 = ProgressionBase::Gap(gap(&g, &[], &[]));
        assert!(is_proper(&rank0).unwrap());
    }

    #[test]
    fn generalized_matches_gap_in_abelian() {
        let g = z(30);
        let spec = GeneralizedProgressionSpec {
            group: Arc::clone(&g),
            generators: vec![4, 7],
            lengths: vec![rat(2, 1), rat(3, 1)],
        };
        let by_words = expand_generalized(&spec).unwrap();
        let by_gap = expand_gap(&gap(&g, &[4, 7], &[2, 3])).unwrap();
        assert_eq!(by_words, by_gap);
    }

    #[test]
    fn generalized_rank_zero_is_identity() {
        let g = Arc::new(s3());
        let spec = GeneralizedProgressionSpec {
            group: Arc::clone(&g),
            generators: vec![],
            lengths: vec![],
        };
        assert_eq!(expand_generalized(&spec).unwrap().elements(), vec![0]);
    }

    #[test]
    fn nilpotence_step_examples() {
        let g = z(15);
        assert_eq!(
            nilpotence_step(&g, &[3, 5], 6).unwrap(),
            StepResult::Nilpotent(1)
        );
        let h = Arc::new(heisenberg3());
        // generators x = (1,0,0) -> 1, y = (0,1,0) -> 3
        assert_eq!(
            nilpotence_step(&h, &[1, 3], 6).unwrap(),
            StepResult::Nilpotent(2)
        );
        let s = Arc::new(s3());
        assert_eq!(
            nilpotence_step(&s, &[1, 4], 6).unwrap(),
            StepResult::NotWithinCap
        );
    }

    #[test]
    fn empty_generators_have_step_zero() {
        let g = z(7);
        assert_eq!(nilpotence_step(&g, &[], 6).unwrap(), StepResult::Nilpotent(0));
    }

    #[test]
    fn normal_form_examples() {
        let g = z(40);
        // proper coset progression whose quotient is still proper
        let trivial = Subgroup::trivial(&g);
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(gap(&g, &[1], &[5])),
            trivial,
        )
        .unwrap();
        let rep = check_c_normal_form(&spec, 1).unwrap();
        assert!(rep.holds, "{rep:?}");

        // improper P(2;3) in Z_10 fails the size condition at c = 1
        let g10 = z(10);
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(gap(&g10, &[2], &[3])),
            Subgroup::trivial(&g10),
        )
        .unwrap();
        let rep = check_c_normal_form(&spec, 1).unwrap();
        assert_eq!(rep.size_condition, Verdict::Fail);
        assert!(!rep.holds);

        // rank 0 with any c
        let h = crate::subgroup::generate_closure(&g10, &[5]).unwrap();
        let spec = CosetProgressionSpec::from_subgroup(h);
        let rep = check_c_normal_form(&spec, 3).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn scaling_is_exact() {
        let g = z(101);
        let spec = CosetProgressionSpec::new(
            ProgressionBase::Gap(gap(&g, &[1], &[10])),
            Subgroup::trivial(&g),
        )
        .unwrap();
        let half = scale(&spec, &rat(1, 2)).unwrap();
        assert_eq!(expand_coset_progression(&spec).unwrap().len(), 21);
        assert_eq!(expand_coset_progression(&half).unwrap().len(), 11);
        let same = scale(&spec, &rat(1, 1)).unwrap();
        assert_eq!(
            expand_coset_progression(&same).unwrap(),
            expand_coset_progression(&spec).unwrap()
        );
        // composition law
        let a = scale(&scale(&spec, &rat(2, 3)).unwrap(), &rat(3, 4)).unwrap();
        let b = scale(&spec, &rat(1, 2)).unwrap();
        assert_eq!(
            expand_coset_progression(&a).unwrap(),
            expand_coset_progression(&b).unwrap()
        );
    }

    #[test]
    fn bohr_to_progression_on_z7() {
        let g = z(7);
        let spec = BohrSpec::new(Arc::clone(&g), vec![vec![rat(1, 7)]], rat(1, 4)).unwrap();
        let w = bohr_to_proper_progression(&spec).unwrap();
        let p = expand_coset_progression(&w.spec).unwrap();
        assert_eq!(p.elements(), vec![0, 1, 6]);
        assert!(is_proper_coset(&w.spec).unwrap());
    }

    #[test]
    fn bohr_to_progression_on_z12() {
        let g = z(12);
        let spec = BohrSpec::new(Arc::clone(&g), vec![vec![rat(1, 12)]], rat(3, 10)).unwrap();
        let w = bohr_to_proper_progression(&spec).unwrap();
        let p = expand_coset_progression(&w.spec).unwrap();
        // B = {0,±1,±2,±3}: the rank-1 witness must equal it
        assert_eq!(p.elements(), vec![0, 1, 2, 3, 9, 10, 11]);
    }

    #[test]
    fn bohr_kernel_case_gives_rank_zero() {
        // tau(x) = 3x/12 on Z_12 has kernel {0,4,8}; delta below 3/12 makes
        // B equal the kernel subgroup
        let g = z(12);
        let spec = BohrSpec::new(Arc::clone(&g), vec![vec![rat(3, 12)]], rat(1, 5)).unwrap();
        let w = bohr_to_proper_progression(&spec).unwrap();
        assert_eq!(w.rank, 0);
        let p = expand_coset_progression(&w.spec).unwrap();
        assert_eq!(p.elements(), vec![0, 4, 8]);
    }

    #[test]
    fn bohr_cover_on_z64() {
        let g = z(64);
        let a = GroupSet::full(&g);
        let spec = BohrSpec::new(Arc::clone(&g), vec![vec![rat(1, 64)]], rat(1, 4)).unwrap();
        let cov = bohr_cover(&a, &spec).unwrap();
        assert!(cov.within_bound, "|X| = {} > bound", cov.points.len());
        assert!(cov.points.len() <= 8);
    }

    #[test]
    fn bohr_cover_single_point_when_b_is_everything() {
        let g = z(16);
        let a = GroupSet::from_elements(&g, &[1, 2, 5]).unwrap();
        let spec = BohrSpec::new(Arc::clone(&g), vec![vec![rat(1, 16)]], rat(1, 1)).unwrap();
        let cov = bohr_cover(&a, &spec).unwrap();
        assert_eq!(cov.points.len(), 1);
    }
}
