//! # digraphe
//!
//! Reversible, table-driven transliteration between the Latin and Ajami
//! (supplemented Arabic) orthographies of Senegalese languages.
//!
//! A [`MappingTable`] lists grapheme correspondences. [`validate_table`]
//! checks that the table can be read back unambiguously, a
//! [`Transliterator`] applies it in either direction, and
//! [`check_round_trip`] proves the round trip on every short word.
//!
//! ```
//! use digraphe::{tables, Direction, Mode, Transliterator};
//!
//! let wolof = tables::wolof();
//! let to_ajami = Transliterator::new(&wolof, Direction::LatinToAjami).unwrap();
//! let (ajami, _) = to_ajami.transliterate("garab", Mode::Strict).unwrap();
//! assert_eq!(ajami, "گَرَب");
//!
//! let to_latin = Transliterator::new(&wolof, Direction::AjamiToLatin).unwrap();
//! assert_eq!(to_latin.transliterate(&ajami, Mode::Strict).unwrap().0, "garab");
//! ```

pub mod cli;
pub mod error;
pub mod formats;
pub mod segmenter;
pub mod table;
pub mod tables;
pub mod transducer;
pub mod unicode;
pub mod validate;
pub mod verifier;

pub use error::{Error, ParseErrorKind, Result};
pub use formats::{transliterate_html, transliterate_text, transliterate_text_stream, HtmlOptions};
pub use segmenter::{build_trie, classify_context, segment, ContextSet, GraphemeTrie, Token, TokenKind};
pub use table::{parse_table, serialize_table, Context, FoldCase, MappingTable, Rule};
pub use transducer::{transliterate, Direction, Mode, TransliterationReport, Transliterator, UnknownChar};
pub use unicode::Delimiters;
pub use validate::{validate_table, Diagnostic, DiagnosticCode, ValidationReport};
pub use verifier::{check_round_trip, count_realizable, sardinas_patterson, RoundTripFailure, RoundTripReport};
