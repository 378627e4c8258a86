//! Table validation: everything that must hold before a table can be trusted
//! to convert text and read it back.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::table::{Context, FoldCase, MappingTable, Rule};
use crate::verifier::sardinas_patterson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    /// Two rules share (source, context).
    DuplicateSource,
    /// Two rules share (target, context); the reverse direction is ambiguous.
    TargetCollision,
    DelimiterInSource,
    DelimiterInTarget,
    /// The target-side code is not uniquely decodable.
    UndecodableForward,
    /// The source-side code is not uniquely decodable.
    UndecodableReverse,
    /// A shorter rule is hidden by a longer one whose output extends it.
    ShadowedPrefix,
    /// A rule spells exactly what a sequence of other rules already spells.
    CompositeRule,
    /// A case-folded alias would clash with an explicit rule and is dropped.
    CaseFoldConflict,
}

impl DiagnosticCode {
    /// Codes that make the engine itself refuse a table. Decodability
    /// failures still allow conversion, they only void the round-trip
    /// guarantee.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            DiagnosticCode::DuplicateSource
                | DiagnosticCode::TargetCollision
                | DiagnosticCode::DelimiterInSource
                | DiagnosticCode::DelimiterInTarget
        )
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit enum serializes");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    /// Table line of the offending rule, when there is one.
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
    pub decodable_forward: bool,
    pub decodable_reverse: bool,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has_structural_errors(&self) -> bool {
        self.errors.iter().any(|d| d.code.is_structural())
    }
}

fn diag(code: DiagnosticCode, rule: &Rule, message: String) -> Diagnostic {
    Diagnostic {
        code,
        message,
        line: (rule.line > 0).then_some(rule.line),
    }
}

fn contexts_overlap(a: Context, b: Context) -> bool {
    a == b || a == Context::Any || b == Context::Any
}

/// Whether `rule` is spelled, on both sides at once, by a sequence of other
/// rules that could stand where it stands.
fn is_composite(rules: &[Rule], index: usize) -> bool {
    let rule = &rules[index];
    let src: Vec<char> = rule.source.chars().collect();
    let tgt: Vec<char> = rule.target.chars().collect();
    let parts: Vec<(Vec<char>, Vec<char>, Context)> = rules
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, r)| (r.source.chars().collect(), r.target.chars().collect(), r.context))
        .collect();

    // Depth-first over (source offset, target offset); the first part may
    // share the rule's own context, later parts must be context-free.
    let mut stack = vec![(0usize, 0usize, true)];
    let mut visited = HashSet::new();
    while let Some((i, j, first)) = stack.pop() {
        if i == src.len() && j == tgt.len() {
            return true;
        }
        if !visited.insert((i, j, first)) {
            continue;
        }
        for (ps, pt, pc) in &parts {
            let ctx_ok = *pc == Context::Any || (first && *pc == rule.context);
            if ctx_ok && src[i..].starts_with(ps) && tgt[j..].starts_with(pt) {
                stack.push((i + ps.len(), j + pt.len(), false));
            }
        }
    }
    false
}

/// Checks a parsed table. Problems are collected, never thrown.
pub fn validate_table(table: &MappingTable) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let rules = &table.rules;

    let mut by_source: HashMap<(&str, Context), &Rule> = HashMap::new();
    let mut by_target: HashMap<(&str, Context), &Rule> = HashMap::new();
    for rule in rules {
        if let Some(prev) = by_source.insert((rule.source.as_str(), rule.context), rule) {
            errors.push(diag(
                DiagnosticCode::DuplicateSource,
                rule,
                format!(
                    "source {:?} in context {} already defined on line {}",
                    rule.source, rule.context, prev.line
                ),
            ));
        }
        if let Some(prev) = by_target.insert((rule.target.as_str(), rule.context), rule) {
            errors.push(diag(
                DiagnosticCode::TargetCollision,
                rule,
                format!(
                    "target {:?} in context {} is also produced by {:?} (line {})",
                    rule.target, rule.context, prev.source, prev.line
                ),
            ));
        }
        if let Some(c) = rule.source.chars().find(|&c| table.delimiters.contains(c)) {
            errors.push(diag(
                DiagnosticCode::DelimiterInSource,
                rule,
                format!("source {:?} contains delimiter {:?}", rule.source, c),
            ));
        }
        if let Some(c) = rule.target.chars().find(|&c| table.delimiters.contains(c)) {
            errors.push(diag(
                DiagnosticCode::DelimiterInTarget,
                rule,
                format!("target {:?} contains delimiter {:?}", rule.target, c),
            ));
        }
    }

    for (i, short) in rules.iter().enumerate() {
        for (j, long) in rules.iter().enumerate() {
            if i != j
                && contexts_overlap(short.context, long.context)
                && long.source.len() > short.source.len()
                && long.source.starts_with(&short.source)
                && long.target.starts_with(&short.target)
            {
                warnings.push(diag(
                    DiagnosticCode::ShadowedPrefix,
                    short,
                    format!(
                        "{:?} is shadowed by {:?} (line {}), which extends it with the same output prefix",
                        short.source, long.source, long.line
                    ),
                ));
            }
        }
    }

    let composite: Vec<bool> = (0..rules.len()).map(|i| is_composite(rules, i)).collect();
    for (rule, _) in rules.iter().zip(&composite).filter(|(_, c)| **c) {
        warnings.push(diag(
            DiagnosticCode::CompositeRule,
            rule,
            format!(
                "{:?} -> {:?} is a concatenation of other rules; left out of the decodability check",
                rule.source, rule.target
            ),
        ));
    }

    if table.fold_case != FoldCase::None {
        let folded_side = |r: &Rule| match table.fold_case {
            FoldCase::Target => r.target.clone(),
            _ => r.source.clone(),
        };
        let existing: HashSet<(String, Context)> =
            rules.iter().map(|r| (folded_side(r), r.context)).collect();
        for rule in rules {
            for alias in case_variants(&folded_side(rule)) {
                if existing.contains(&(alias.clone(), rule.context)) {
                    warnings.push(diag(
                        DiagnosticCode::CaseFoldConflict,
                        rule,
                        format!("uppercase form {alias:?} is already an explicit rule; alias skipped"),
                    ));
                }
            }
        }
    }

    let code_of = |side: fn(&Rule) -> &str| -> Vec<&str> {
        rules
            .iter()
            .zip(&composite)
            .filter(|(_, c)| !**c)
            .map(|(r, _)| side(r))
            .collect()
    };
    // Rules are non-empty by construction, so the only error is unreachable.
    let decodable_forward = sardinas_patterson(&code_of(|r| &r.target)).unwrap_or(false);
    let decodable_reverse = sardinas_patterson(&code_of(|r| &r.source)).unwrap_or(false);
    if !decodable_forward {
        errors.push(Diagnostic {
            code: DiagnosticCode::UndecodableForward,
            message: "target strings are not uniquely decodable; Ajami output may read back ambiguously".into(),
            line: None,
        });
    }
    if !decodable_reverse {
        errors.push(Diagnostic {
            code: DiagnosticCode::UndecodableReverse,
            message: "source strings are not uniquely decodable".into(),
            line: None,
        });
    }

    ValidationReport {
        errors,
        warnings,
        decodable_forward,
        decodable_reverse,
    }
}

/// Capitalized and all-uppercase spellings of `text` that differ from it.
pub(crate) fn case_variants(text: &str) -> Vec<String> {
    let mut chars = text.chars();
    let Some(first) = chars.next() else {
        return Vec::new();
    };
    let title: String = first.to_uppercase().chain(chars).collect();
    let upper = text.to_uppercase();
    let mut out = Vec::new();
    for v in [title, upper] {
        if v != text && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn any(s: &str, t: &str) -> Rule {
        Rule::new(s, t, Context::Any)
    }

    fn codes(ds: &[Diagnostic]) -> Vec<DiagnosticCode> {
        ds.iter().map(|d| d.code).collect()
    }

    #[test]
    fn target_collision_is_error() {
        let t = MappingTable::new("t", vec![any("b", "X"), any("p", "X")]);
        let r = validate_table(&t);
        assert!(codes(&r.errors).contains(&DiagnosticCode::TargetCollision));
        assert!(!r.accepted());
        assert!(r.has_structural_errors());
    }

    #[test]
    fn duplicate_source_is_error() {
        let t = MappingTable::new("t", vec![any("b", "X"), any("b", "Y")]);
        let r = validate_table(&t);
        assert_eq!(codes(&r.errors), [DiagnosticCode::DuplicateSource]);
    }

    #[test]
    fn same_pair_in_other_context_is_fine() {
        let t = MappingTable::new(
            "t",
            vec![any("a", "X"), Rule::new("a", "Y", Context::Initial), Rule::new("b", "X", Context::Final)],
        );
        let r = validate_table(&t);
        assert!(!r.has_structural_errors(), "{:?}", r.errors);
    }

    #[test]
    fn ambiguous_code_flags_forward() {
        let t = MappingTable::new("t", vec![any("a", "x"), any("b", "xy"), any("c", "y")]);
        let r = validate_table(&t);
        assert!(!r.decodable_forward);
        assert!(r.decodable_reverse);
        assert_eq!(codes(&r.errors), [DiagnosticCode::UndecodableForward]);
        assert!(!r.has_structural_errors());
    }

    #[test]
    fn delimiters_rejected_in_rules() {
        let t = MappingTable::new("t", vec![any("a b", "x"), any("c", "y.")]);
        let r = validate_table(&t);
        assert_eq!(
            codes(&r.errors),
            [DiagnosticCode::DelimiterInSource, DiagnosticCode::DelimiterInTarget]
        );
    }

    #[test]
    fn composite_digraph_is_warning_not_ambiguity() {
        let t = MappingTable::new("t", vec![any("n", "ن"), any("t", "ت"), any("nt", "نت")]);
        let r = validate_table(&t);
        assert!(r.accepted(), "{:?}", r.errors);
        assert!(r.decodable_forward && r.decodable_reverse);
        let w = codes(&r.warnings);
        assert!(w.contains(&DiagnosticCode::CompositeRule));
        assert!(w.contains(&DiagnosticCode::ShadowedPrefix));
    }

    #[test]
    fn non_composite_digraph_stays_in_code() {
        // "ny" spells something other than n + y, so {n, y, ny} is ambiguous.
        let t = MappingTable::new("t", vec![any("n", "N"), any("y", "Y"), any("ny", "Ñ")]);
        let r = validate_table(&t);
        assert!(r.decodable_forward);
        assert!(!r.decodable_reverse);
    }

    #[test]
    fn composite_needs_context_free_tail() {
        let t = MappingTable::new(
            "t",
            vec![any("n", "N"), Rule::new("t", "T", Context::Final), any("nt", "NT")],
        );
        let r = validate_table(&t);
        assert!(!codes(&r.warnings).contains(&DiagnosticCode::CompositeRule));
    }

    #[test]
    fn case_variants_of_graphemes() {
        assert_eq!(case_variants("nt"), ["Nt", "NT"]);
        assert_eq!(case_variants("ŋ"), ["Ŋ"]);
        assert_eq!(case_variants("ب"), Vec::<String>::new());
    }

    #[test]
    fn case_fold_conflict_warns() {
        let mut t = MappingTable::new("t", vec![any("k", "ك"), any("K", "ڪ")]);
        t.fold_case = FoldCase::Source;
        let r = validate_table(&t);
        assert_eq!(codes(&r.warnings), [DiagnosticCode::CaseFoldConflict]);
    }

    #[test]
    fn empty_table_is_accepted() {
        let r = validate_table(&MappingTable::new("t", vec![]));
        assert!(r.accepted());
        assert!(r.decodable_forward && r.decodable_reverse);
    }

    #[test]
    fn code_display() {
        assert_eq!(DiagnosticCode::TargetCollision.to_string(), "TARGET_COLLISION");
    }
}
