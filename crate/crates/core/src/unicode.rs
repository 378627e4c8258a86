//! Normalization and delimiter helpers shared by every module.

use std::borrow::Cow;
use std::collections::BTreeSet;

use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

/// Arabic comma, semicolon and question mark.
pub const ARABIC_PUNCTUATION: [char; 3] = ['\u{060C}', '\u{061B}', '\u{061F}'];

/// Canonical composed form, borrowing when the input already is.
pub fn nfc(text: &str) -> Cow<'_, str> {
    match is_nfc_quick(text.chars()) {
        IsNormalized::Yes => Cow::Borrowed(text),
        _ => {
            let composed: String = text.nfc().collect();
            if composed == text {
                Cow::Borrowed(text)
            } else {
                Cow::Owned(composed)
            }
        }
    }
}

pub fn is_nfc(text: &str) -> bool {
    matches!(nfc(text), Cow::Borrowed(_))
}

/// The built-in word boundary set: whitespace, ASCII punctuation, Arabic
/// punctuation and digits.
pub fn is_default_delimiter(c: char) -> bool {
    c.is_whitespace()
        || c.is_ascii_punctuation()
        || c.is_numeric()
        || ARABIC_PUNCTUATION.contains(&c)
}

/// Characters that separate words.
///
/// Either the built-in set, an explicit list, or both. Stored symbolically
/// because "all Unicode whitespace and digits" is not worth materializing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delimiters {
    include_default: bool,
    extra: BTreeSet<char>,
}

impl Default for Delimiters {
    fn default() -> Self {
        Self {
            include_default: true,
            extra: BTreeSet::new(),
        }
    }
}

impl Delimiters {
    /// No delimiters at all; only useful as a starting point for `with_char`.
    pub fn empty() -> Self {
        Self {
            include_default: false,
            extra: BTreeSet::new(),
        }
    }

    pub fn with_default(mut self) -> Self {
        self.include_default = true;
        self
    }

    pub fn with_char(mut self, c: char) -> Self {
        self.extra.insert(c);
        self
    }

    pub fn includes_default(&self) -> bool {
        self.include_default
    }

    /// Characters added on top of (or instead of) the default set.
    pub fn extra(&self) -> impl Iterator<Item = char> + '_ {
        self.extra.iter().copied()
    }

    #[inline]
    pub fn contains(&self, c: char) -> bool {
        (self.include_default && is_default_delimiter(c)) || self.extra.contains(&c)
    }
}
