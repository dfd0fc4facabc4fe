use std::collections::{BTreeSet, HashMap, HashSet};

use super::{TernaryXor, XorEquation};
use crate::formula::{ClauseId, CnfFormula};

/// Sign masks (bit i set = i-th smallest variable negated) with an even
/// number of negations. Their four clauses together encode `a ^ b ^ c = 1`.
const EVEN_MASKS: [u8; 4] = [0b000, 0b011, 0b101, 0b110];
const ODD_MASKS: [u8; 4] = [0b001, 0b010, 0b100, 0b111];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TernaryScan {
    /// Sorted by variable triple.
    pub ternaries: Vec<TernaryXor>,
    /// Triples where both parity quadruples are present (`empty = 1` once
    /// summed). Nothing is extracted for them.
    pub contradictory: Vec<[u32; 3]>,
}

pub fn find_ternary_xors(f: &CnfFormula) -> TernaryScan {
    let mut groups: HashMap<[u32; 3], [Option<ClauseId>; 8]> = HashMap::new();
    for c in f.clauses() {
        if c.len() != 3 {
            continue;
        }
        let mut lits = [c.literals[0], c.literals[1], c.literals[2]];
        lits.sort_unstable_by_key(|l| l.var);
        let key = [lits[0].var, lits[1].var, lits[2].var];
        let mask = lits.iter().enumerate().fold(0u8, |m, (i, l)| m | (l.negated as u8) << i);
        let slot = &mut groups.entry(key).or_default()[mask as usize];
        // first clause id wins; later duplicates stay in the formula
        slot.get_or_insert(c.id);
    }

    let complete = |slots: &[Option<ClauseId>; 8], masks: &[u8; 4]| -> Option<[ClauseId; 4]> {
        let mut ids = [0; 4];
        for (k, &m) in masks.iter().enumerate() {
            ids[k] = slots[m as usize]?;
        }
        ids.sort_unstable();
        Some(ids)
    };

    let mut keys: Vec<[u32; 3]> = groups.keys().copied().collect();
    keys.sort_unstable();
    let mut scan = TernaryScan::default();
    for key in keys {
        let slots = &groups[&key];
        match (complete(slots, &EVEN_MASKS), complete(slots, &ODD_MASKS)) {
            (Some(_), Some(_)) => scan.contradictory.push(key),
            (Some(ids), None) => {
                scan.ternaries.push(TernaryXor { equation: XorEquation::new(key, true), source_clause_ids: ids })
            }
            (None, Some(ids)) => {
                scan.ternaries.push(TernaryXor { equation: XorEquation::new(key, false), source_clause_ids: ids })
            }
            (None, None) => {}
        }
    }
    scan
}

/// Variables occurring in strictly more than `theta` clauses.
pub fn frequent_vars(f: &CnfFormula, theta: u32) -> BTreeSet<u32> {
    (1..=f.num_vars()).filter(|&v| f.occ(v) > theta).collect()
}

/// A merged equation and the ternaries (indices into the input list) that
/// were summed to produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorChain {
    pub equation: XorEquation,
    pub members: Vec<usize>,
}

/// Greedy chain growth. Each chain is seeded with the first unused ternary
/// holding at least two frequent variables (else the first unused one) and
/// absorbs, one at a time, the first unused ternary sharing exactly one
/// variable with the running sum. Every ternary ends up in exactly one
/// chain; ternaries nothing attaches to come back as singleton chains.
///
/// Under [`MergeRule::Private`] the shared variable must also belong to no
/// ternary other than the two being joined, so the merged sum is equivalent
/// to its members rather than merely implied by them.
pub fn grow_chains(ternaries: &[TernaryXor], frequent: &BTreeSet<u32>, rule: MergeRule) -> Vec<XorChain> {
    grow_chains_with(ternaries, frequent, rule, |_| true)
}

/// Which shared variables a chain may be joined across.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MergeRule {
    /// Any single shared variable.
    AnyShared,
    /// Only a variable occurring in exactly the two ternaries being joined.
    #[default]
    Private,
}

fn grow_chains_with(
    ternaries: &[TernaryXor],
    frequent: &BTreeSet<u32>,
    rule: MergeRule,
    outside_ok: impl Fn(u32) -> bool,
) -> Vec<XorChain> {
    let max_var = ternaries.iter().flat_map(|t| t.equation.vars().iter().copied()).max().unwrap_or(0) as usize;
    let mut in_chain = vec![false; max_var + 1];
    let mut tern_occ = vec![0u32; max_var + 1];
    for t in ternaries {
        for &v in t.equation.vars() {
            tern_occ[v as usize] += 1;
        }
    }
    let linkable = |v: u32| match rule {
        MergeRule::AnyShared => true,
        MergeRule::Private => tern_occ[v as usize] == 2 && outside_ok(v),
    };
    let mut used = vec![false; ternaries.len()];
    let mut first_unused = 0usize;
    let mut chains = Vec::new();

    loop {
        while first_unused < used.len() && used[first_unused] {
            first_unused += 1;
        }
        if first_unused == used.len() {
            break;
        }
        let seed = (first_unused..ternaries.len())
            .find(|&i| !used[i] && ternaries[i].equation.vars().iter().filter(|v| frequent.contains(v)).count() >= 2)
            .unwrap_or(first_unused);

        used[seed] = true;
        let mut eq = ternaries[seed].equation.clone();
        let mut members = vec![seed];
        for &v in eq.vars() {
            in_chain[v as usize] = true;
        }
        loop {
            let next = (first_unused..ternaries.len()).find(|&i| {
                if used[i] {
                    return false;
                }
                let mut shared = ternaries[i].equation.vars().iter().filter(|&&v| in_chain[v as usize]);
                match (shared.next(), shared.next()) {
                    (Some(&v), None) => linkable(v),
                    _ => false,
                }
            });
            let Some(i) = next else { break };
            used[i] = true;
            for &v in ternaries[i].equation.vars() {
                in_chain[v as usize] ^= true;
            }
            eq = eq.merge(&ternaries[i].equation);
            members.push(i);
        }
        for &v in eq.vars() {
            in_chain[v as usize] = false;
        }
        chains.push(XorChain { equation: eq, members });
    }
    chains
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Ids of clauses mentioning at least one frequent variable.
    pub structured: Vec<ClauseId>,
    /// Every other clause, order preserved.
    pub residual: CnfFormula,
}

pub fn partition(f: &CnfFormula, frequent: &BTreeSet<u32>) -> Partition {
    let mut structured = Vec::new();
    let residual = f.filter_clauses(|c| {
        if c.vars().any(|v| frequent.contains(&v)) {
            structured.push(c.id);
            false
        } else {
            true
        }
    });
    Partition { structured, residual }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    pub ternaries: Vec<TernaryXor>,
    pub contradictory: Vec<[u32; 3]>,
    pub chains: Vec<XorChain>,
    pub frequent_vars: BTreeSet<u32>,
    /// Ids of the clauses replaced by ternary equations.
    pub consumed_clause_ids: Vec<ClauseId>,
    pub structured_clause_ids: Vec<ClauseId>,
    /// Clauses neither consumed nor structured.
    pub residual: CnfFormula,
}

impl ExtractionResult {
    pub fn equations(&self) -> Vec<XorEquation> {
        self.chains.iter().map(|c| c.equation.clone()).collect()
    }

    /// Number of distinct variables across all merged equations.
    pub fn equation_vars(&self) -> usize {
        self.chains.iter().flat_map(|c| c.equation.vars()).collect::<HashSet<_>>().len()
    }
}

/// Full extraction on an (already simplified) formula: ternary recovery,
/// frequent-variable selection with threshold `theta`, chain growth, and
/// the split of the unconsumed clauses into structured and residual parts.
/// Under [`MergeRule::Private`] a link variable must also be absent from
/// every clause outside its two ternaries.
pub fn extract(f: &CnfFormula, theta: u32, rule: MergeRule) -> ExtractionResult {
    let scan = find_ternary_xors(f);
    let frequent = frequent_vars(f, theta);
    let chains = grow_chains_with(&scan.ternaries, &frequent, rule, |v| f.occ(v) == 8);
    let mut consumed: Vec<ClauseId> = scan.ternaries.iter().flat_map(|t| t.source_clause_ids).collect();
    consumed.sort_unstable();
    let remaining = f.filter_clauses(|c| consumed.binary_search(&c.id).is_err());
    let Partition { structured, residual } = partition(&remaining, &frequent);
    ExtractionResult {
        ternaries: scan.ternaries,
        contradictory: scan.contradictory,
        chains,
        frequent_vars: frequent,
        consumed_clause_ids: consumed,
        structured_clause_ids: structured,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Assignment, CnfFormula};

    const A: i64 = 1;
    const B: i64 = 2;
    const C: i64 = 3;

    fn f(nv: u32, cls: &[Vec<i64>]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(nv, cls).unwrap()
    }

    fn even_quad(a: i64, b: i64, c: i64) -> Vec<Vec<i64>> {
        vec![vec![a, -b, -c], vec![-a, b, -c], vec![-a, -b, c], vec![a, b, c]]
    }

    fn odd_quad(a: i64, b: i64, c: i64) -> Vec<Vec<i64>> {
        vec![vec![-a, -b, -c], vec![-a, b, c], vec![a, -b, c], vec![a, b, -c]]
    }

    fn tern(vars: [u32; 3], rhs: bool) -> TernaryXor {
        TernaryXor { equation: XorEquation::new(vars, rhs), source_clause_ids: [0; 4] }
    }

    #[test]
    fn even_quadruple_is_rhs_one() {
        let scan = find_ternary_xors(&f(3, &even_quad(A, B, C)));
        assert_eq!(scan.ternaries.len(), 1);
        assert_eq!(scan.ternaries[0].equation, XorEquation::new([1, 2, 3], true));
        assert_eq!(scan.ternaries[0].source_clause_ids, [0, 1, 2, 3]);
    }

    #[test]
    fn odd_quadruple_is_rhs_zero() {
        let scan = find_ternary_xors(&f(3, &odd_quad(A, B, C)));
        assert_eq!(scan.ternaries[0].equation, XorEquation::new([1, 2, 3], false));
    }

    #[test]
    fn quadruples_match_truth_tables() {
        for (quad, rhs) in [(even_quad(A, B, C), true), (odd_quad(A, B, C), false)] {
            let g = f(3, &quad);
            let eq = XorEquation::new([1, 2, 3], rhs);
            for bits in 0u32..8 {
                let a = Assignment::from_bools(&[bits & 1 == 1, bits & 2 == 2, bits & 4 == 4]);
                let cnf = g.evaluate(&a).unwrap().satisfied;
                assert_eq!(cnf, eq.holds(|v| a.get(v).unwrap()), "rhs {rhs} row {bits:03b}");
            }
        }
    }

    #[test]
    fn incomplete_pattern_ignored() {
        let scan = find_ternary_xors(&f(3, &even_quad(A, B, C)[..3]));
        assert!(scan.ternaries.is_empty());
    }

    #[test]
    fn both_parities_flagged() {
        let mut cls = even_quad(A, B, C);
        cls.extend(odd_quad(A, B, C));
        let scan = find_ternary_xors(&f(3, &cls));
        assert!(scan.ternaries.is_empty());
        assert_eq!(scan.contradictory, vec![[1, 2, 3]]);
    }

    #[test]
    fn literal_order_and_var_order_do_not_matter() {
        // same pattern over (5, 2, 7), literals shuffled
        let cls = vec![vec![-7, 5, -2], vec![2, -5, -7], vec![7, -2, -5], vec![7, 2, 5]];
        let scan = find_ternary_xors(&f(7, &cls));
        assert_eq!(scan.ternaries[0].equation, XorEquation::new([2, 5, 7], true));
    }

    #[test]
    fn output_sorted_by_triple() {
        let mut cls = even_quad(4, 5, 6);
        cls.extend(odd_quad(1, 2, 3));
        let scan = find_ternary_xors(&f(6, &cls));
        let keys: Vec<_> = scan.ternaries.iter().map(|t| t.equation.vars().to_vec()).collect();
        assert_eq!(keys, vec![vec![1, 2, 3], vec![4, 5, 6]]);
    }

    #[test]
    fn frequent_is_strict() {
        let mut cls = Vec::new();
        for i in 0..15 {
            cls.push(vec![1, 3 + i]);
        }
        for i in 0..14 {
            cls.push(vec![2, 3 + i]);
        }
        let g = f(20, &cls);
        assert_eq!(g.occ(1), 15);
        assert_eq!(g.occ(2), 14);
        assert_eq!(frequent_vars(&g, 14), BTreeSet::from([1]));
    }

    #[test]
    fn rare_vars_not_frequent() {
        let g = f(4, &[vec![1, 2], vec![3, 4], vec![-1, -3], vec![-2, -4]]);
        assert!(frequent_vars(&g, 14).is_empty());
    }

    #[test]
    fn worked_chain() {
        // A,B,C = 1,2,3; D = 4; F = 6
        let ts = vec![tern([1, 2, 3], true), tern([3, 4, 6], true)];
        for rule in [MergeRule::AnyShared, MergeRule::Private] {
            let chains = grow_chains(&ts, &BTreeSet::from([1, 2]), rule);
            assert_eq!(chains.len(), 1);
            assert_eq!(chains[0].equation, XorEquation::new([1, 2, 4, 6], false));
            assert_eq!(chains[0].members, vec![0, 1]);
        }
    }

    #[test]
    fn disjoint_ternaries_stay_apart() {
        let ts = vec![tern([1, 2, 3], true), tern([4, 5, 6], false)];
        let chains = grow_chains(&ts, &BTreeSet::new(), MergeRule::AnyShared);
        let eqs: Vec<_> = chains.iter().map(|c| c.equation.clone()).collect();
        assert_eq!(eqs, vec![ts[0].equation.clone(), ts[1].equation.clone()]);
    }

    #[test]
    fn seed_prefers_two_frequent_vars() {
        let ts = vec![tern([1, 2, 3], false), tern([4, 5, 6], true), tern([6, 7, 8], false)];
        let chains = grow_chains(&ts, &BTreeSet::from([4, 5]), MergeRule::AnyShared);
        assert_eq!(chains[0].members, vec![1, 2]);
        assert_eq!(chains[1].members, vec![0]);
    }

    #[test]
    fn two_shared_vars_do_not_attach() {
        let ts = vec![tern([1, 2, 3], false), tern([2, 3, 4], true)];
        let chains = grow_chains(&ts, &BTreeSet::new(), MergeRule::AnyShared);
        assert_eq!(chains.len(), 2);
    }

    #[test]
    fn private_rule_skips_busy_links() {
        // var 1 sits in three ternaries, var 3 only in two
        let ts = vec![tern([1, 2, 3], false), tern([1, 4, 5], true), tern([1, 6, 7], true), tern([3, 8, 9], false)];
        let any = grow_chains(&ts, &BTreeSet::from([1, 2]), MergeRule::AnyShared);
        // joining across var 1 cancels it, so the third ternary no longer attaches
        assert_eq!(any[0].members, vec![0, 1, 3]);
        let private = grow_chains(&ts, &BTreeSet::from([1, 2]), MergeRule::Private);
        assert_eq!(private[0].members, vec![0, 3]);
        assert_eq!(private[0].equation, XorEquation::new([1, 2, 8, 9], false));
        assert_eq!(private.len(), 3);
    }

    #[test]
    fn private_rule_respects_outside_clauses() {
        // {1,2,3}=0 and {3,4,5}=0 share 3, which also sits in the binary {3 v 6}
        let mut cls = odd_quad(1, 2, 3);
        cls.extend(odd_quad(3, 4, 5));
        cls.push(vec![3, 6]);
        let g = f(6, &cls);
        assert_eq!(extract(&g, 100, MergeRule::Private).chains.len(), 2);
        assert_eq!(extract(&g, 100, MergeRule::AnyShared).chains.len(), 1);
        cls.pop();
        let g = f(6, &cls);
        assert_eq!(extract(&g, 100, MergeRule::Private).chains.len(), 1);
    }

    #[test]
    fn partition_extremes() {
        let g = f(3, &[vec![1, 2], vec![2, 3], vec![-1, -3]]);
        let p = partition(&g, &BTreeSet::new());
        assert!(p.structured.is_empty());
        assert_eq!(p.residual, g);
        let p = partition(&g, &BTreeSet::from([1, 2, 3]));
        assert_eq!(p.structured, vec![0, 1, 2]);
        assert_eq!(p.residual.num_clauses(), 0);
    }

    #[test]
    fn dump_format() {
        let mut out = Vec::new();
        super::super::dump_equations(&[XorEquation::new([4, 1], true)], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x 1 4 = 1\n");
    }
}
