//! Exhaustive checks of the conditional power-set algebra on small spaces.
//!
//! The domain at `k` atoms is every conditional set whose fibers are subsets
//! of `{0..universe-1}`: `2^(universe·k)` sets, with the empty fiber standing
//! for an atom outside the carrier.

use crate::measure::{Event, Partition};
use crate::sets::{CondSet, Fiber};
use crate::values::CondNat;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawCount {
    pub checks: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub atoms: usize,
    pub universe: u32,
    pub sets: usize,
    pub laws: BTreeMap<&'static str, LawCount>,
    /// The first few failing instances, as text.
    pub examples: Vec<String>,
}

const MAX_EXAMPLES: usize = 8;

impl LawReport {
    pub fn passed(&self) -> bool {
        self.laws.values().all(|c| c.failures == 0)
    }

    pub fn checks(&self) -> u64 {
        self.laws.values().map(|c| c.checks).sum()
    }

    fn new(atoms: usize, universe: u32, sets: usize) -> Self {
        Self { atoms, universe, sets, ..Default::default() }
    }

    fn merge(&mut self, other: LawReport) {
        for (law, count) in other.laws {
            let slot = self.laws.entry(law).or_default();
            slot.checks += count.checks;
            slot.failures += count.failures;
        }
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
    }
}

/// The laws checked, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    DoubleComplement,
    MeetComplement,
    JoinComplement,
    MeetIdempotent,
    JoinIdempotent,
    MeetTop,
    JoinBottom,
    Bounds,
    MemberComplement,
    RestrictCarrier,
    MeetCommutative,
    JoinCommutative,
    AbsorptionMeet,
    AbsorptionJoin,
    OrderMeet,
    OrderJoin,
    DeMorganMeet,
    DeMorganJoin,
    MeetBelow,
    JoinAbove,
    MemberMeet,
    MemberJoin,
    MeetAssociative,
    JoinAssociative,
    MeetDistributes,
    JoinDistributes,
    Gluing,
}

impl Law {
    pub const ALL: [Law; 27] = [
        Law::DoubleComplement,
        Law::MeetComplement,
        Law::JoinComplement,
        Law::MeetIdempotent,
        Law::JoinIdempotent,
        Law::MeetTop,
        Law::JoinBottom,
        Law::Bounds,
        Law::MemberComplement,
        Law::RestrictCarrier,
        Law::MeetCommutative,
        Law::JoinCommutative,
        Law::AbsorptionMeet,
        Law::AbsorptionJoin,
        Law::OrderMeet,
        Law::OrderJoin,
        Law::DeMorganMeet,
        Law::DeMorganJoin,
        Law::MeetBelow,
        Law::JoinAbove,
        Law::MemberMeet,
        Law::MemberJoin,
        Law::MeetAssociative,
        Law::JoinAssociative,
        Law::MeetDistributes,
        Law::JoinDistributes,
        Law::Gluing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::DoubleComplement => "double-complement",
            Law::MeetComplement => "meet-complement",
            Law::JoinComplement => "join-complement",
            Law::MeetIdempotent => "meet-idempotent",
            Law::JoinIdempotent => "join-idempotent",
            Law::MeetTop => "meet-top",
            Law::JoinBottom => "join-bottom",
            Law::Bounds => "bounds",
            Law::MemberComplement => "member-complement",
            Law::RestrictCarrier => "restrict-carrier",
            Law::MeetCommutative => "meet-commutative",
            Law::JoinCommutative => "join-commutative",
            Law::AbsorptionMeet => "absorption-meet",
            Law::AbsorptionJoin => "absorption-join",
            Law::OrderMeet => "order-meet",
            Law::OrderJoin => "order-join",
            Law::DeMorganMeet => "de-morgan-meet",
            Law::DeMorganJoin => "de-morgan-join",
            Law::MeetBelow => "meet-below",
            Law::JoinAbove => "join-above",
            Law::MemberMeet => "member-meet",
            Law::MemberJoin => "member-join",
            Law::MeetAssociative => "meet-associative",
            Law::JoinAssociative => "join-associative",
            Law::MeetDistributes => "meet-distributes",
            Law::JoinDistributes => "join-distributes",
            Law::Gluing => "gluing",
        }
    }
}

/// Counters for one run; folded into a [`LawReport`] at the end.
struct Tally {
    report: LawReport,
    counts: [LawCount; Law::ALL.len()],
    used: [bool; Law::ALL.len()],
}

impl Tally {
    fn new(atoms: usize, universe: u32, sets: usize) -> Self {
        Self {
            report: LawReport::new(atoms, universe, sets),
            counts: std::array::from_fn(|_| LawCount::default()),
            used: [false; Law::ALL.len()],
        }
    }

    fn record(&mut self, law: Law, ok: bool, detail: impl FnOnce() -> String) {
        let i = law as usize;
        self.used[i] = true;
        self.counts[i].checks += 1;
        if !ok {
            self.counts[i].failures += 1;
            if self.report.examples.len() < MAX_EXAMPLES {
                self.report.examples.push(format!("{}: {}", law.name(), detail()));
            }
        }
    }

    fn finish(mut self) -> LawReport {
        for law in Law::ALL {
            if self.used[law as usize] {
                self.report.laws.insert(law.name(), self.counts[law as usize].clone());
            }
        }
        self.report
    }
}

/// Every conditional set on `k` atoms with fibers inside `{0..universe-1}`.
pub fn domain(k: usize, universe: u32) -> Vec<CondSet> {
    let per_atom = 1u64 << universe;
    let total = per_atom.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let fibers = (0..k)
                .map(|_| {
                    let m = code % per_atom;
                    code /= per_atom;
                    Fiber::from_mask(m)
                })
                .collect();
            CondSet::from_fibers(fibers)
        })
        .collect()
}

fn naturals(k: usize) -> CondSet {
    CondSet::from_fibers(vec![Fiber::naturals(); k])
}

/// Test values for membership: every constant below `universe + 1` and a
/// value that differs per atom.
fn probes(k: usize, universe: u32) -> Vec<CondNat> {
    let top = u64::from(universe) + 1;
    let mut out: Vec<CondNat> = (0..top).map(|c| CondNat::from_u64s(&vec![c; k])).collect();
    out.push(CondNat::from_u64s(&(0..k as u64).map(|a| a % top).collect::<Vec<_>>()));
    out
}

/// Laws in one set: double complement, complementation, idempotence,
/// bounds, and the complement as the negation of membership.
pub fn unary_laws(k: usize, universe: u32) -> LawReport {
    let sets = domain(k, universe);
    let mut r = Tally::new(k, universe, sets.len());
    let bottom = CondSet::bottom(k);
    let top = naturals(k);
    let probes = probes(k, universe);
    for n in &sets {
        let c = n.complement();
        r.record(Law::DoubleComplement, c.complement() == *n, || n.to_string());
        r.record(Law::MeetComplement, n.intersect(&c).unwrap() == bottom, || n.to_string());
        r.record(Law::JoinComplement, n.union(&c).unwrap() == top, || n.to_string());
        r.record(Law::MeetIdempotent, n.intersect(n).unwrap() == *n, || n.to_string());
        r.record(Law::JoinIdempotent, n.union(n).unwrap() == *n, || n.to_string());
        r.record(Law::MeetTop, n.intersect(&top).unwrap() == *n, || n.to_string());
        r.record(Law::JoinBottom, n.union(&bottom).unwrap() == *n, || n.to_string());
        r.record(Law::Bounds, bottom.includes(n).unwrap() && n.includes(&top).unwrap(), || n.to_string());
        for p in &probes {
            r.record(Law::MemberComplement, c.member(p).unwrap() == !n.member(p).unwrap(), || format!("{n} at {p}"));
        }
        let restricted = n.restrict(&n.carrier());
        r.record(Law::RestrictCarrier, restricted == *n, || n.to_string());
    }
    r.finish()
}

/// Laws in two sets: commutativity, absorption, De Morgan, the order
/// characterizations and membership of meets and joins.
///
/// Each unordered pair is visited once; order-sensitive laws are checked in
/// both orientations.
pub fn binary_laws(k: usize, universe: u32) -> LawReport {
    let sets = domain(k, universe);
    let mut r = Tally::new(k, universe, sets.len());
    let complements: Vec<CondSet> = sets.iter().map(CondSet::complement).collect();
    let probes = probes(k, universe);
    let members: Vec<Vec<Event>> = sets.iter().map(|s| probes.iter().map(|p| s.member(p).unwrap()).collect()).collect();
    for (i, n) in sets.iter().enumerate() {
        for (j, m) in sets.iter().enumerate().skip(i) {
            let meet = n.intersect(m).unwrap();
            let join = n.union(m).unwrap();
            let pair = || format!("{n}, {m}");
            r.record(Law::MeetCommutative, meet == m.intersect(n).unwrap(), pair);
            r.record(Law::JoinCommutative, join == m.union(n).unwrap(), pair);
            for (x, y) in [(n, m), (m, n)] {
                r.record(Law::AbsorptionMeet, x.intersect(&join).unwrap() == *x, pair);
                r.record(Law::AbsorptionJoin, x.union(&meet).unwrap() == *x, pair);
                let below = x.includes(y).unwrap();
                r.record(Law::OrderMeet, below == (meet == *x), pair);
                r.record(Law::OrderJoin, below == (join == *y), pair);
            }
            r.record(Law::DeMorganMeet, meet.complement() == complements[i].union(&complements[j]).unwrap(), pair);
            r.record(Law::DeMorganJoin, join.complement() == complements[i].intersect(&complements[j]).unwrap(), pair);
            r.record(Law::MeetBelow, meet.includes(n).unwrap() && meet.includes(m).unwrap(), pair);
            r.record(Law::JoinAbove, n.includes(&join).unwrap() && m.includes(&join).unwrap(), pair);
            for (p, probe) in probes.iter().enumerate() {
                r.record(Law::MemberMeet, meet.member(probe).unwrap() == (members[i][p] & members[j][p]), pair);
                r.record(Law::MemberJoin, join.member(probe).unwrap() == (members[i][p] | members[j][p]), pair);
            }
        }
    }
    r.finish()
}

/// Laws in three sets: associativity and distributivity.
pub fn ternary_laws(k: usize, universe: u32) -> LawReport {
    let sets = domain(k, universe);
    let mut r = Tally::new(k, universe, sets.len());
    for a in &sets {
        for b in &sets {
            let ab_meet = a.intersect(b).unwrap();
            let ab_join = a.union(b).unwrap();
            for c in &sets {
                let triple = || format!("{a}, {b}, {c}");
                r.record(
                    Law::MeetAssociative,
                    ab_meet.intersect(c).unwrap() == a.intersect(&b.intersect(c).unwrap()).unwrap(),
                    triple,
                );
                r.record(
                    Law::JoinAssociative,
                    ab_join.union(c).unwrap() == a.union(&b.union(c).unwrap()).unwrap(),
                    triple,
                );
                r.record(
                    Law::MeetDistributes,
                    a.intersect(&b.union(c).unwrap()).unwrap() == ab_meet.union(&a.intersect(c).unwrap()).unwrap(),
                    triple,
                );
                r.record(
                    Law::JoinDistributes,
                    a.union(&b.intersect(c).unwrap()).unwrap() == ab_join.intersect(&a.union(c).unwrap()).unwrap(),
                    triple,
                );
            }
        }
    }
    r.finish()
}

/// Every partition of `{0..k-1}` into nonempty blocks, as events.
pub fn partitions(k: usize) -> Vec<Partition> {
    fn grow(atom: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if atom == k {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(atom);
            grow(atom + 1, k, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![atom]);
        grow(atom + 1, k, blocks, out);
        blocks.pop();
    }
    let mut raw = Vec::new();
    grow(0, k, &mut Vec::new(), &mut raw);
    let space = crate::measure::MeasureSpace::uniform(k).expect("k ≥ 1");
    raw.into_iter()
        .map(|blocks| {
            let events = blocks.iter().map(|b| space.event(b).expect("atoms in range")).collect();
            space.validate_partition(events).expect("blocks partition the atoms")
        })
        .collect()
}

/// The gluing identity `i(Σ n_k|A_k, N) = ∪_k (i(n_k, N) ∩ A_k)` for every
/// set of the domain, every partition, and pieces drawn from the probes.
pub fn gluing_laws(k: usize, universe: u32) -> LawReport {
    let sets = domain(k, universe);
    let mut r = Tally::new(k, universe, sets.len());
    let probes = probes(k, universe);
    let parts = partitions(k);
    for part in &parts {
        let pieces = part.len();
        let choices = probes.len().pow(pieces as u32);
        for mut code in 0..choices {
            let ns: Vec<CondNat> = (0..pieces)
                .map(|_| {
                    let n = probes[code % probes.len()].clone();
                    code /= probes.len();
                    n
                })
                .collect();
            let glued = CondNat::concat(&ns, part).expect("pieces match the partition");
            for set in &sets {
                let lhs = set.member(&glued).unwrap();
                let rhs = ns
                    .iter()
                    .zip(part.pieces())
                    .fold(Event::empty(k), |acc, (n, piece)| acc | (set.member(n).unwrap() & *piece));
                r.record(Law::Gluing, lhs == rhs, || format!("{set} at {glued}"));
            }
        }
    }
    r.finish()
}

/// Unary, binary and gluing laws at `k` atoms over `universe`, and ternary
/// laws over `ternary_universe`.
pub fn boolean_laws(k: usize, universe: u32, ternary_universe: u32) -> LawReport {
    let mut r = unary_laws(k, universe);
    r.merge(binary_laws(k, universe));
    r.merge(gluing_laws(k, universe));
    r.merge(ternary_laws(k, ternary_universe));
    r
}
