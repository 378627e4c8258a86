//! Longest-match segmentation of text into rule applications.

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::table::{Context, FoldCase, MappingTable};
use crate::transducer::{Direction, Mode};
use crate::unicode::Delimiters;
use crate::validate::case_variants;

/// The set of context classes a match position satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContextSet(u8);

impl ContextSet {
    pub fn of(contexts: &[Context]) -> Self {
        ContextSet(contexts.iter().fold(0, |acc, c| acc | c.bit()))
    }

    pub fn contains(self, context: Context) -> bool {
        self.0 & context.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Context> {
        Context::ALL.into_iter().filter(move |c| self.contains(*c))
    }
}

/// Which positional classes a match `[match_start, match_end)` inside the
/// word `[word_start, word_end)` falls under. `any` is always included.
pub fn classify_context(
    word_start: usize,
    word_end: usize,
    match_start: usize,
    match_end: usize,
) -> Result<ContextSet> {
    if !(word_start <= match_start && match_start < match_end && match_end <= word_end) {
        return Err(Error::Contract(format!(
            "match {match_start}..{match_end} is not a non-empty part of word {word_start}..{word_end}"
        )));
    }
    Ok(classify(word_start, word_end, match_start, match_end))
}

#[inline]
fn classify(word_start: usize, word_end: usize, match_start: usize, match_end: usize) -> ContextSet {
    let at_start = match_start == word_start;
    let at_end = match_end == word_end;
    let contexts: &[Context] = match (at_start, at_end) {
        (true, true) => &[Context::Isolated, Context::Initial, Context::Final, Context::Any],
        (true, false) => &[Context::Initial, Context::Any],
        (false, true) => &[Context::Final, Context::Any],
        (false, false) => &[Context::Medial, Context::Any],
    };
    ContextSet::of(contexts)
}

/// A rule ending at a trie node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terminal {
    /// Index into the table's rule list.
    pub rule: usize,
    pub context: Context,
    pub priority: u8,
    /// Reached through an uppercase alias of the rule's key.
    pub folded: bool,
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<char, u32>,
    terminals: Vec<Terminal>,
}

/// Prefix tree over one side of a mapping table.
#[derive(Debug, Clone)]
pub struct GraphemeTrie {
    nodes: Vec<Node>,
    direction: Direction,
}

impl GraphemeTrie {
    fn new(direction: Direction) -> Self {
        Self {
            nodes: vec![Node::default()],
            direction,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[0].children.is_empty()
    }

    fn insert(&mut self, key: &str, terminal: Terminal) -> bool {
        let mut node = 0usize;
        for c in key.chars() {
            let next = self.nodes.len() as u32;
            let child = *self.nodes[node].children.entry(c).or_insert(next);
            if child == next {
                self.nodes.push(Node::default());
            }
            node = child as usize;
        }
        let terminals = &mut self.nodes[node].terminals;
        if terminals.iter().any(|t| t.context == terminal.context) {
            return false;
        }
        terminals.push(terminal);
        true
    }

    /// Rules whose key is exactly `key`.
    pub fn lookup(&self, key: &str) -> &[Terminal] {
        let mut node = 0usize;
        for c in key.chars() {
            match self.nodes[node].children.get(&c) {
                Some(&n) => node = n as usize,
                None => return &[],
            }
        }
        &self.nodes[node].terminals
    }
}

/// Indexes rule sources (`LatinToAjami`) or rule targets (`AjamiToLatin`).
///
/// When the table folds case on the indexed side, capitalized and
/// all-uppercase spellings are added as aliases of the lowercase rule,
/// unless an explicit rule already owns that key and context.
pub fn build_trie(table: &MappingTable, direction: Direction) -> GraphemeTrie {
    let mut trie = GraphemeTrie::new(direction);
    let key = |r: &crate::table::Rule| -> String {
        match direction {
            Direction::LatinToAjami => r.source.clone(),
            Direction::AjamiToLatin => r.target.clone(),
        }
    };
    for (i, rule) in table.rules.iter().enumerate() {
        trie.insert(
            &key(rule),
            Terminal {
                rule: i,
                context: rule.context,
                priority: rule.priority,
                folded: false,
            },
        );
    }
    let folds = matches!(
        (direction, table.fold_case),
        (Direction::LatinToAjami, FoldCase::Source) | (Direction::AjamiToLatin, FoldCase::Target)
    );
    if folds {
        for (i, rule) in table.rules.iter().enumerate() {
            for alias in case_variants(&key(rule)) {
                trie.insert(
                    &alias,
                    Terminal {
                        rule: i,
                        context: rule.context,
                        priority: rule.priority,
                        folded: true,
                    },
                );
            }
        }
    }
    trie
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// One rule application.
    Mapped {
        rule: usize,
        context: Context,
        folded: bool,
    },
    /// A run of delimiter characters.
    Delimiters,
    /// A character no rule covers (lenient mode only).
    Unknown(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte range into the segmented text.
    pub span: Range<usize>,
}

impl Token {
    pub fn is_mapped(&self) -> bool {
        matches!(self.kind, TokenKind::Mapped { .. })
    }

    pub fn rule(&self) -> Option<usize> {
        match self.kind {
            TokenKind::Mapped { rule, .. } => Some(rule),
            _ => None,
        }
    }

    pub fn context_used(&self) -> Option<Context> {
        match self.kind {
            TokenKind::Mapped { context, .. } => Some(context),
            _ => None,
        }
    }
}

/// Splits composed `text` into tokens that tile it.
///
/// Inside a word the longest match whose rule context fits the position
/// wins; ties go to the more specific context, then to the higher priority,
/// then to the rule declared first.
pub fn segment(text: &str, trie: &GraphemeTrie, delimiters: &Delimiters, mode: Mode) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        let is_delim = delimiters.contains(chars[i].1);
        while i < chars.len() && delimiters.contains(chars[i].1) == is_delim {
            i += 1;
        }
        if is_delim {
            tokens.push(Token {
                kind: TokenKind::Delimiters,
                span: byte_at(start)..byte_at(i),
            });
        } else {
            segment_word(&chars, start, i, text.len(), trie, mode, &mut tokens)?;
        }
    }
    Ok(tokens)
}

fn segment_word(
    chars: &[(usize, char)],
    word_start: usize,
    word_end: usize,
    text_len: usize,
    trie: &GraphemeTrie,
    mode: Mode,
    tokens: &mut Vec<Token>,
) -> Result<()> {
    let byte_at = |i: usize| chars.get(i).map_or(text_len, |&(b, _)| b);
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let mut pos = word_start;
    while pos < word_end {
        candidates.clear();
        let mut node = 0usize;
        for (end, &(_, c)) in chars[pos..word_end].iter().enumerate() {
            match trie.nodes[node].children.get(&c) {
                Some(&n) => node = n as usize,
                None => break,
            }
            if !trie.nodes[node].terminals.is_empty() {
                candidates.push((pos + end + 1, node));
            }
        }

        let chosen = candidates.iter().rev().find_map(|&(end, node)| {
            let classes = classify(word_start, word_end, pos, end);
            trie.nodes[node]
                .terminals
                .iter()
                .filter(|t| classes.contains(t.context))
                .max_by_key(|t| (t.context.specificity(), t.priority, std::cmp::Reverse(t.rule)))
                .map(|t| (end, *t))
        });

        match chosen {
            Some((end, t)) => {
                tokens.push(Token {
                    kind: TokenKind::Mapped {
                        rule: t.rule,
                        context: t.context,
                        folded: t.folded,
                    },
                    span: byte_at(pos)..byte_at(end),
                });
                pos = end;
            }
            None => {
                let (offset, ch) = chars[pos];
                if mode == Mode::Strict {
                    return Err(Error::UnknownChar { offset, ch });
                }
                tokens.push(Token {
                    kind: TokenKind::Unknown(ch),
                    span: offset..byte_at(pos + 1),
                });
                pos += 1;
            }
        }
    }
    Ok(())
}
