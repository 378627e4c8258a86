//! Grapheme replacement in both directions.
//!
//! The reverse direction runs the same engine over the inverted table, so
//! reversibility is a property of the table data rather than of the code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::segmenter::{build_trie, segment, GraphemeTrie, Token, TokenKind};
use crate::table::MappingTable;
use crate::unicode::nfc;
use crate::validate::validate_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LatinToAjami,
    AjamiToLatin,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::LatinToAjami => Direction::AjamiToLatin,
            Direction::AjamiToLatin => Direction::LatinToAjami,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LatinToAjami => "latin_to_ajami",
            Direction::AjamiToLatin => "ajami_to_latin",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "latin_to_ajami" => Ok(Direction::LatinToAjami),
            "ajami_to_latin" => Ok(Direction::AjamiToLatin),
            _ => Err(Error::Contract(format!("unknown direction `{s}`"))),
        }
    }
}

/// What to do with characters no rule covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Fail on the first unknown character.
    Strict,
    /// Copy unknown characters through and record them.
    #[default]
    Lenient,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Lenient => "lenient",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "lenient" => Ok(Mode::Lenient),
            _ => Err(Error::Contract(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownChar {
    #[serde(rename = "char")]
    pub ch: char,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransliterationReport {
    pub direction: Direction,
    pub language: String,
    pub mode: Mode,
    pub chars_in: usize,
    pub chars_out: usize,
    pub tokens_mapped: usize,
    pub tokens_passthrough: usize,
    pub unknown: Vec<UnknownChar>,
    /// Matches made through an uppercase alias; their case is not restored
    /// on the way back.
    pub case_folded: usize,
}

impl TransliterationReport {
    pub fn new(direction: Direction, language: impl Into<String>, mode: Mode) -> Self {
        Self {
            direction,
            language: language.into(),
            mode,
            chars_in: 0,
            chars_out: 0,
            tokens_mapped: 0,
            tokens_passthrough: 0,
            unknown: Vec::new(),
            case_folded: 0,
        }
    }

    /// Adds the counts of `other`, shifting its unknown offsets by `offset`.
    pub fn absorb(&mut self, other: &TransliterationReport, offset: usize) {
        self.chars_in += other.chars_in;
        self.chars_out += other.chars_out;
        self.tokens_mapped += other.tokens_mapped;
        self.tokens_passthrough += other.tokens_passthrough;
        self.case_folded += other.case_folded;
        self.unknown.extend(other.unknown.iter().map(|u| UnknownChar {
            ch: u.ch,
            offset: u.offset + offset,
        }));
    }
}

/// A table compiled for one direction. Immutable and shareable across
/// threads.
#[derive(Debug, Clone)]
pub struct Transliterator {
    table: MappingTable,
    trie: GraphemeTrie,
    direction: Direction,
}

impl Transliterator {
    /// Compiles `table` for `direction`. Tables with duplicate sources,
    /// target collisions or delimiters inside rules are refused; an
    /// undecodable table still converts but will not read back reliably.
    pub fn new(table: &MappingTable, direction: Direction) -> Result<Self> {
        let report = validate_table(table);
        if report.has_structural_errors() {
            let msgs: Vec<String> = report
                .errors
                .iter()
                .filter(|d| d.code.is_structural())
                .map(|d| format!("{}: {}", d.code, d.message))
                .collect();
            return Err(Error::Contract(format!("table is not valid: {}", msgs.join("; "))));
        }
        let effective = match direction {
            Direction::LatinToAjami => table.clone(),
            Direction::AjamiToLatin => table.invert()?,
        };
        let trie = build_trie(&effective, Direction::LatinToAjami);
        Ok(Self {
            table: effective,
            trie,
            direction,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn language(&self) -> &str {
        &self.table.language
    }

    /// The table as seen by this direction (inverted for `AjamiToLatin`).
    pub fn table(&self) -> &MappingTable {
        &self.table
    }

    /// Segments already-composed text.
    pub fn segment(&self, text: &str, mode: Mode) -> Result<Vec<Token>> {
        segment(text, &self.trie, &self.table.delimiters, mode)
    }

    /// The replacement text for one token of `text`.
    pub fn render<'a>(&'a self, text: &'a str, token: &Token) -> &'a str {
        match token.kind {
            TokenKind::Mapped { rule, .. } => &self.table.rules[rule].target,
            TokenKind::Delimiters | TokenKind::Unknown(_) => &text[token.span.clone()],
        }
    }

    /// Converts `text`. Offsets in the report and in errors refer to the
    /// composed form of the input.
    pub fn transliterate(&self, text: &str, mode: Mode) -> Result<(String, TransliterationReport)> {
        let text = nfc(text);
        let tokens = self.segment(&text, mode)?;
        let mut out = String::with_capacity(text.len() * 2);
        let mut report = TransliterationReport::new(self.direction, self.table.language.clone(), mode);
        for token in &tokens {
            out.push_str(self.render(&text, token));
            match token.kind {
                TokenKind::Mapped { folded, .. } => {
                    report.tokens_mapped += 1;
                    report.case_folded += usize::from(folded);
                }
                TokenKind::Delimiters => report.tokens_passthrough += 1,
                TokenKind::Unknown(ch) => {
                    report.tokens_passthrough += 1;
                    report.unknown.push(UnknownChar {
                        ch,
                        offset: token.span.start,
                    });
                }
            }
        }
        let out = match nfc(&out) {
            std::borrow::Cow::Borrowed(_) => out,
            std::borrow::Cow::Owned(composed) => composed,
        };
        report.chars_in = text.chars().count();
        report.chars_out = out.chars().count();
        Ok((out, report))
    }

    /// Converts a single word (no delimiters allowed).
    pub fn transliterate_word(&self, word: &str, mode: Mode) -> Result<(String, TransliterationReport)> {
        if let Some(c) = word.chars().find(|&c| self.table.delimiters.contains(c)) {
            return Err(Error::Contract(format!("word {word:?} contains delimiter {c:?}")));
        }
        self.transliterate(word, mode)
    }
}

/// One-shot conversion; compiles the table on every call.
pub fn transliterate(
    text: &str,
    table: &MappingTable,
    direction: Direction,
    mode: Mode,
) -> Result<(String, TransliterationReport)> {
    Transliterator::new(table, direction)?.transliterate(text, mode)
}
