//! Mapping tables: the rule model and its line-oriented file format.
//!
//! A table file is UTF-8 text, one record per line:
//!
//! ```text
//! # comment (only at column 0)
//! @language wolof
//! @version 1.0
//! @delimiters default
//! b	ب	any
//! nt	نت	any	2
//! ```
//!
//! Rule lines carry `source TAB target TAB context [TAB priority]`. Inside
//! fields and directive values the escapes `\uXXXX`, `\UXXXXXXXX`, `\t`,
//! `\\` and `\#` are decoded. Rule text is stored in canonical composed form.

// The example above is TAB-separated, like real table files.
#![allow(clippy::tabs_in_doc_comments)]

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseErrorKind, Result};
use crate::unicode::{nfc, Delimiters};

/// Word-position class a rule is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Context {
    Any,
    Initial,
    Medial,
    Final,
    Isolated,
}

impl Context {
    pub const ALL: [Context; 5] = [
        Context::Any,
        Context::Initial,
        Context::Medial,
        Context::Final,
        Context::Isolated,
    ];

    /// Tie-break rank among equal-length matches: isolated > initial = final > medial > any.
    pub fn specificity(self) -> u8 {
        match self {
            Context::Isolated => 3,
            Context::Initial | Context::Final => 2,
            Context::Medial => 1,
            Context::Any => 0,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Context::Any => "any",
            Context::Initial => "initial",
            Context::Medial => "medial",
            Context::Final => "final",
            Context::Isolated => "isolated",
        }
    }

    pub(crate) fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Context {
    type Err = ParseErrorKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Context::ALL
            .into_iter()
            .find(|c| c.keyword() == s)
            .ok_or_else(|| ParseErrorKind::InvalidContext(s.to_owned()))
    }
}

/// One directed grapheme correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub source: String,
    pub target: String,
    pub context: Context,
    pub priority: u8,
    /// 1-based line in the table file, 0 for rules built in code.
    pub line: usize,
}

impl Rule {
    /// Builds a rule from code, normalizing both sides.
    pub fn new(source: &str, target: &str, context: Context) -> Self {
        Self {
            source: nfc(source).into_owned(),
            target: nfc(target).into_owned(),
            context,
            priority: 0,
            line: 0,
        }
    }

    pub fn with_priority(mut self, priority: u8) -> Self {
        self.priority = priority;
        self
    }

    pub fn inverted(&self) -> Rule {
        Rule {
            source: self.target.clone(),
            target: self.source.clone(),
            ..self.clone()
        }
    }
}

/// Which side of a table is matched case-insensitively (uppercase input
/// matches the lowercase rule). Arabic script has no case, so this is only
/// ever the Latin side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldCase {
    #[default]
    None,
    Source,
    Target,
}

impl FoldCase {
    fn swapped(self) -> Self {
        match self {
            FoldCase::None => FoldCase::None,
            FoldCase::Source => FoldCase::Target,
            FoldCase::Target => FoldCase::Source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingTable {
    pub language: String,
    pub version: String,
    pub rules: Vec<Rule>,
    pub delimiters: Delimiters,
    pub fold_case: FoldCase,
    /// Directives other than the ones with dedicated fields.
    pub metadata: BTreeMap<String, String>,
}

impl Default for MappingTable {
    fn default() -> Self {
        Self {
            language: String::new(),
            version: String::new(),
            rules: Vec::new(),
            delimiters: Delimiters::default(),
            fold_case: FoldCase::None,
            metadata: BTreeMap::new(),
        }
    }
}

impl MappingTable {
    pub fn new(language: impl Into<String>, rules: Vec<Rule>) -> Self {
        Self {
            language: language.into(),
            rules,
            ..Self::default()
        }
    }

    /// Swaps source and target of every rule. Context, priority and order are
    /// kept, so inverting twice gives back the same table.
    pub fn invert(&self) -> Result<MappingTable> {
        let mut seen = HashSet::new();
        for rule in &self.rules {
            if !seen.insert((rule.target.as_str(), rule.context)) {
                return Err(Error::InvalidTable(format!(
                    "target {:?} appears twice in context {} (line {}); table is not invertible",
                    rule.target, rule.context, rule.line
                )));
            }
        }
        Ok(MappingTable {
            rules: self.rules.iter().map(Rule::inverted).collect(),
            fold_case: self.fold_case.swapped(),
            ..self.clone()
        })
    }
}

/// Parses a table file.
pub fn parse_table(raw: &[u8]) -> Result<MappingTable> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })?;
    parse_table_str(text)
}

pub fn parse_table_str(text: &str) -> Result<MappingTable> {
    let mut table = MappingTable::default();
    for (idx, raw_line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let err = |kind| Error::Parse {
            line: line_no,
            kind,
        };

        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(directive) = line.strip_prefix('@') {
            apply_directive(&mut table, directive).map_err(err)?;
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(err(ParseErrorKind::FieldCount(fields.len())));
        }
        let source = nfc(&unescape(fields[0]).map_err(err)?).into_owned();
        let target = nfc(&unescape(fields[1]).map_err(err)?).into_owned();
        if source.is_empty() {
            return Err(err(ParseErrorKind::EmptyField("source")));
        }
        if target.is_empty() {
            return Err(err(ParseErrorKind::EmptyField("target")));
        }
        let context: Context = fields[2].trim().parse().map_err(err)?;
        let priority = match fields.get(3) {
            Some(p) => p
                .trim()
                .parse::<u8>()
                .map_err(|_| err(ParseErrorKind::InvalidPriority((*p).to_owned())))?,
            None => 0,
        };
        table.rules.push(Rule {
            source,
            target,
            context,
            priority,
            line: line_no,
        });
    }
    Ok(table)
}

fn apply_directive(table: &mut MappingTable, directive: &str) -> Result<(), ParseErrorKind> {
    let (key, value) = match directive.split_once([' ', '\t']) {
        Some((k, v)) => (k, v.trim()),
        None => (directive, ""),
    };
    if key.is_empty() {
        return Err(ParseErrorKind::InvalidDirective(directive.to_owned()));
    }
    match key {
        "language" => table.language = unescape(value)?,
        "version" => table.version = unescape(value)?,
        "delimiters" => {
            let mut delimiters = Delimiters::empty();
            for item in value.split_whitespace() {
                if item == "default" {
                    delimiters = delimiters.with_default();
                } else {
                    for c in unescape(item)?.chars() {
                        delimiters = delimiters.with_char(c);
                    }
                }
            }
            table.delimiters = delimiters;
        }
        "fold-case" => {
            table.fold_case = match value {
                "source" => FoldCase::Source,
                "target" => FoldCase::Target,
                "none" => FoldCase::None,
                _ => return Err(ParseErrorKind::InvalidDirective(directive.to_owned())),
            }
        }
        _ => {
            table.metadata.insert(key.to_owned(), unescape(value)?);
        }
    }
    Ok(())
}

fn unescape(field: &str) -> Result<String, ParseErrorKind> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some('#') => out.push('#'),
            Some(u @ ('u' | 'U')) => {
                let width = if u == 'u' { 4 } else { 8 };
                let hex: String = chars.by_ref().take(width).collect();
                let decoded = (hex.len() == width && hex.chars().all(|h| h.is_ascii_hexdigit()))
                    .then(|| u32::from_str_radix(&hex, 16).ok())
                    .flatten()
                    .and_then(char::from_u32);
                match decoded {
                    Some(ch) => out.push(ch),
                    None => return Err(ParseErrorKind::InvalidEscape(format!("\\{u}{hex}"))),
                }
            }
            Some(other) => return Err(ParseErrorKind::InvalidEscape(format!("\\{other}"))),
            None => return Err(ParseErrorKind::InvalidEscape("\\".to_owned())),
        }
    }
    Ok(out)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '#' => out.push_str("\\#"),
            '@' => out.push_str("\\u0040"),
            c if c.is_control() || c.is_whitespace() => {
                if (c as u32) <= 0xFFFF {
                    out.push_str(&format!("\\u{:04X}", c as u32));
                } else {
                    out.push_str(&format!("\\U{:08X}", c as u32));
                }
            }
            c => out.push(c),
        }
    }
    out
}

/// Writes a table back in file form. `parse_table(serialize_table(t))`
/// reproduces every rule's content.
pub fn serialize_table(table: &MappingTable) -> String {
    let mut out = String::new();
    if !table.language.is_empty() {
        out.push_str(&format!("@language {}\n", escape(&table.language)));
    }
    if !table.version.is_empty() {
        out.push_str(&format!("@version {}\n", escape(&table.version)));
    }
    if table.delimiters != Delimiters::default() {
        let mut items = Vec::new();
        if table.delimiters.includes_default() {
            items.push("default".to_owned());
        }
        let extra: String = table.delimiters.extra().collect();
        if !extra.is_empty() {
            items.push(escape(&extra));
        }
        out.push_str(&format!("@delimiters {}\n", items.join(" ")));
    }
    match table.fold_case {
        FoldCase::None => {}
        FoldCase::Source => out.push_str("@fold-case source\n"),
        FoldCase::Target => out.push_str("@fold-case target\n"),
    }
    for (key, value) in &table.metadata {
        out.push_str(&format!("@{key} {}\n", escape(value)));
    }
    for rule in &table.rules {
        out.push_str(&escape(&rule.source));
        out.push('\t');
        out.push_str(&escape(&rule.target));
        out.push('\t');
        out.push_str(rule.context.keyword());
        if rule.priority != 0 {
            out.push_str(&format!("\t{}", rule.priority));
        }
        out.push('\n');
    }
    out
}
