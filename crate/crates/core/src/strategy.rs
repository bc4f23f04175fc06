//! Named rule lists for [`normalize`](crate::rewrite::normalize).
//!
//! Order matters: normalization always applies the first rule that matches,
//! so shrinking rules come before the ones that grow the diagram.

use std::collections::BTreeMap;

use crate::bang::{builtin_pattern_rule, builtin_pattern_rules, expand_all, expand_rule};
use crate::rules::{builtin_rules, fusion_rules, RewriteRule, RuleSet};
use crate::shapes::Colour;

/// Largest box count used when pattern rules are expanded for matching.
pub const DEFAULT_EXPANSION_BOUND: usize = 4;

pub const STRATEGY_NAMES: [&str; 2] = ["arith", "simplify"];

fn named(names: &[&str]) -> Vec<RewriteRule> {
    let all = builtin_rules();
    names
        .iter()
        .map(|n| all.get(n).cloned().expect("builtin rule"))
        .collect()
}

fn expansions(name: &str, bound: usize) -> Vec<RewriteRule> {
    let pr = builtin_pattern_rule(name).expect("builtin pattern rule");
    expand_all(&pr, bound).expect("builtin expansions are well formed")
}

/// Rules that evaluate arithmetic diagrams towards encoded naturals: unit
/// laws, the absorbing and cancelling pattern rules, black fusion, and
/// distribution of multiplication over addition last.
pub fn arith_rules(bound: usize) -> RuleSet {
    let mut rules = named(&["ghz_unit", "ghz_unit_right", "w_unit", "w_unit_right"]);
    rules.extend(expansions("delta2_prime", bound));
    rules.extend(expansions("delta3_prime", bound));
    rules.extend(fusion_rules(Colour::Black, 6));
    rules.extend(expansions("delta1_prime", bound));
    RuleSet::from_rules(rules).expect("distinct names")
}

/// Rules that only ever remove vertices.
pub fn simplify_rules() -> RuleSet {
    let mut rules = named(&[
        "ghz_special",
        "ghz_unit",
        "ghz_unit_right",
        "ghz_counit",
        "ghz_counit_right",
        "w_unit",
        "w_unit_right",
        "w_counit",
        "w_counit_right",
        "ghz_identity",
        "w_identity",
        "tick_involution",
        "cross_involution",
        "cross_kills_black_unit",
    ]);
    rules.extend(fusion_rules(Colour::White, 4));
    rules.extend(fusion_rules(Colour::Black, 4));
    RuleSet::from_rules(rules).expect("distinct names")
}

pub fn strategy(name: &str) -> Option<RuleSet> {
    match name {
        "arith" => Some(arith_rules(DEFAULT_EXPANSION_BOUND)),
        "simplify" => Some(simplify_rules()),
        _ => None,
    }
}

/// Every builtin concrete rule followed by every pattern-rule expansion
/// with box counts up to `bound`.
pub fn shipped_rules(bound: usize) -> Vec<RewriteRule> {
    let mut out: Vec<RewriteRule> = builtin_rules().iter().cloned().collect();
    for pr in builtin_pattern_rules() {
        out.extend(expand_all(&pr, bound).expect("builtin expansions are well formed"));
    }
    out
}

/// Finds a rule by name: builtin rules, fusion rules such as
/// `w_fuse_1_2_0` (up to 6 legs), and pattern expansions such as
/// `delta1_prime#2` or `ghz_fusion#1,3`.
pub fn lookup_rule(name: &str) -> Option<RewriteRule> {
    if let Some(r) = builtin_rules().get(name) {
        return Some(r.clone());
    }
    if let Some((base, ks)) = name.split_once('#') {
        let pr = builtin_pattern_rule(base)?;
        let ks: Vec<usize> = ks.split(',').map(|k| k.trim().parse().ok()).collect::<Option<_>>()?;
        let ids = pr.box_ids();
        if ids.len() != ks.len() {
            return None;
        }
        let counts: BTreeMap<String, usize> = ids.into_iter().zip(ks).collect();
        return expand_rule(&pr, &counts).ok();
    }
    [Colour::White, Colour::Black]
        .into_iter()
        .flat_map(|c| fusion_rules(c, 6))
        .find(|r| r.name == name)
}
