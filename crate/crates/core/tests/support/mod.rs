//! Shared test data: golden words, the HTML fixture corpus, and an
//! independent HTML oracle (a regex split of a document into markup and
//! text, plus entity decoding) written without reference to the library's
//! scanner.

#![allow(dead_code)]

use std::path::PathBuf;

use regex::Regex;

/// Example Wolof words with the Ajami spelling
/// the shipped table produces.
pub const GOLDEN: [(&str, &str); 9] = [
    // Reference spellings.
    ("jàng", "\u{062C}\u{064E}\u{0627}\u{0646}\u{06AF}"),
    ("garab", "\u{06AF}\u{064E}\u{0631}\u{064E}\u{0628}"),
    ("bant", "\u{0628}\u{064E}\u{0646}\u{062A}"),
    // Letters disambiguated in the shipped table.
    ("car", "\u{0686}\u{064E}\u{0631}"),
    ("ker", "\u{0643}\u{065C}\u{064A}\u{0631}"),
    ("wér", "\u{0648}\u{065C}\u{0649}\u{0631}"),
    ("bët", "\u{0628}\u{065B}\u{064A}\u{062A}"),
    ("ñaw", "\u{0767}\u{064E}\u{0648}"),
    ("ŋaam", "\u{06A0}\u{064E}\u{064E}\u{0645}"),
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/html")
}

pub fn fixtures() -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "html"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Markup(String),
    Text(String),
}

fn markup_regex(skip: &[&str]) -> Regex {
    let tag_body = r#"(?:[^>"']|"[^"]*"|'[^']*')*"#;
    let mut alts = Vec::new();
    for name in skip {
        alts.push(format!(r"<{name}(?:[\s/]{tag_body})?(?:>(?s:.*?)(?:</{name}(?:[\s/][^>]*)?(?:>|\z)|\z)|\z)"));
    }
    alts.push(r"<!--(?s:.*?)(?:-->|\z)".into());
    alts.push(r"<!\[CDATA\[(?s:.*?)(?:\]\]>|\z)".into());
    alts.push(r"<[!?][^>]*(?:>|\z)".into());
    alts.push(r"</[A-Za-z][^>]*(?:>|\z)".into());
    alts.push(format!(r"<[A-Za-z]{tag_body}(?:>|\z)"));
    Regex::new(&format!("(?i){}", alts.join("|"))).unwrap()
}

/// Splits a document into alternating markup and text segments.
pub fn split(doc: &str, skip: &[&str]) -> Vec<Segment> {
    let re = markup_regex(skip);
    let mut out = Vec::new();
    let mut at = 0;
    for m in re.find_iter(doc) {
        if m.start() > at {
            out.push(Segment::Text(doc[at..m.start()].to_string()));
        }
        out.push(Segment::Markup(m.as_str().to_string()));
        at = m.end();
    }
    if at < doc.len() {
        out.push(Segment::Text(doc[at..].to_string()));
    }
    out
}

/// A text node as a list of pieces: decoded runs and named references that
/// must survive untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Run(String),
    Kept(String),
}

pub fn decode(text: &str) -> Vec<Piece> {
    let re = Regex::new(r"&(#[0-9]+|#[xX][0-9A-Fa-f]+|[A-Za-z0-9]+);").unwrap();
    let mut pieces = Vec::new();
    let mut run = String::new();
    let mut at = 0;
    for c in re.captures_iter(text) {
        let m = c.get(0).unwrap();
        run.push_str(&text[at..m.start()]);
        at = m.end();
        let body = &c[1];
        let decoded = if let Some(hex) = body.strip_prefix("#x").or_else(|| body.strip_prefix("#X")) {
            u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
        } else if let Some(dec) = body.strip_prefix('#') {
            dec.parse::<u32>().ok().and_then(char::from_u32)
        } else {
            match body {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                _ => {
                    if !run.is_empty() {
                        pieces.push(Piece::Run(std::mem::take(&mut run)));
                    }
                    pieces.push(Piece::Kept(m.as_str().to_string()));
                    continue;
                }
            }
        };
        match decoded {
            Some(ch) => run.push(ch),
            None => run.push_str(m.as_str()),
        }
    }
    run.push_str(&text[at..]);
    if !run.is_empty() {
        pieces.push(Piece::Run(run));
    }
    pieces
}

/// Applies `convert` to every decoded run of a text node.
pub fn expected_pieces(text: &str, convert: impl Fn(&str) -> String) -> Vec<Piece> {
    decode(text)
        .into_iter()
        .map(|p| match p {
            Piece::Run(r) => Piece::Run(convert(&r)),
            kept => kept,
        })
        .collect()
}

/// Checks `output` against `input` under the oracle. Returns a description
/// of the first mismatch.
pub fn check(input: &str, output: &str, skip: &[&str], convert: impl Fn(&str) -> String) -> Result<(), String> {
    let a = split(input, skip);
    let b = split(output, skip);
    if a.len() != b.len() {
        return Err(format!("segment count {} vs {}", a.len(), b.len()));
    }
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        match (x, y) {
            (Segment::Markup(m), Segment::Markup(n)) if m == n => {}
            (Segment::Text(t), Segment::Text(u)) => {
                let want = expected_pieces(t, &convert);
                let got = decode(u);
                if want != got {
                    return Err(format!("text segment {i}: want {want:?}, got {got:?}"));
                }
            }
            _ => return Err(format!("segment {i}: {x:?} vs {y:?}")),
        }
    }
    Ok(())
}
