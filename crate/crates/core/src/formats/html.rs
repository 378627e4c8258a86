//! HTML documents: convert text nodes, copy everything else byte for byte.
//!
//! A linear scanner walks the document with a handful of states (text, tag,
//! quoted attribute value, comment, CDATA, declaration, raw-text element).
//! There is no tree and no re-serialization; any byte that is not part of a
//! text node is copied unchanged.
//!
//! Inside text nodes the entities `&amp; &lt; &gt; &quot; &apos;` and numeric
//! references are decoded before conversion. Delimiters and unknown
//! characters keep their original spelling; converted letters that came from
//! numeric references are written back as numeric references. Other named
//! references (`&nbsp;` and friends) are left as they are and act as word
//! boundaries.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::segmenter::TokenKind;
use crate::transducer::{Direction, Mode, TransliterationReport, Transliterator, UnknownChar};
use crate::unicode::is_nfc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtmlOptions {
    /// Elements whose content is copied verbatim. Lowercase ASCII names.
    pub skip_elements: BTreeSet<String>,
    /// Put `dir="rtl"` (to Ajami) or `dir="ltr"` (to Latin) on the root element.
    pub set_dir_attribute: bool,
}

impl Default for HtmlOptions {
    fn default() -> Self {
        Self {
            skip_elements: ["script", "style"].into_iter().map(String::from).collect(),
            set_dir_attribute: false,
        }
    }
}

impl HtmlOptions {
    pub fn with_skip_elements<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.skip_elements = names.into_iter().map(|s| s.as_ref().to_ascii_lowercase()).collect();
        self
    }

    pub fn with_dir_attribute(mut self, on: bool) -> Self {
        self.set_dir_attribute = on;
        self
    }
}

#[derive(Debug)]
enum Markup {
    /// Comment, CDATA, doctype, processing instruction or end tag.
    Opaque { end: usize },
    StartTag(StartTag),
}

#[derive(Debug)]
struct StartTag {
    name: String,
    name_end: usize,
    end: usize,
    self_closing: bool,
    /// (name range, value range without quotes)
    attrs: Vec<(Range<usize>, Option<Range<usize>>)>,
}

fn find_from(doc: &str, from: usize, needle: &str) -> Option<usize> {
    doc[from..].find(needle).map(|i| from + i)
}

/// Recognizes markup starting at `pos` (which holds `<`). `None` means the
/// `<` is plain text.
fn scan_markup(doc: &str, pos: usize) -> Option<Markup> {
    let rest = &doc[pos..];
    let bytes = rest.as_bytes();
    let until = |needle: &str, skip: usize| {
        find_from(doc, pos + skip, needle).map_or(doc.len(), |i| i + needle.len())
    };
    if rest.starts_with("<!--") {
        return Some(Markup::Opaque { end: until("-->", 4) });
    }
    if rest.starts_with("<![CDATA[") {
        return Some(Markup::Opaque { end: until("]]>", 9) });
    }
    if rest.starts_with("<!") || rest.starts_with("<?") {
        return Some(Markup::Opaque { end: until(">", 2) });
    }
    if bytes.len() > 2 && bytes[1] == b'/' && bytes[2].is_ascii_alphabetic() {
        return Some(Markup::Opaque { end: until(">", 2) });
    }
    if bytes.len() > 1 && bytes[1].is_ascii_alphabetic() {
        return Some(Markup::StartTag(scan_start_tag(doc, pos)));
    }
    None
}

fn scan_start_tag(doc: &str, pos: usize) -> StartTag {
    let b = doc.as_bytes();
    let len = b.len();
    let is_space = |c: u8| c.is_ascii_whitespace();
    let mut i = pos + 1;
    while i < len && !is_space(b[i]) && b[i] != b'>' && b[i] != b'/' {
        i += 1;
    }
    let name = doc[pos + 1..i].to_ascii_lowercase();
    let name_end = i;
    let mut attrs = Vec::new();
    let mut self_closing = false;
    loop {
        while i < len && (is_space(b[i]) || b[i] == b'/') {
            self_closing = b[i] == b'/';
            i += 1;
        }
        if i >= len {
            break;
        }
        if b[i] == b'>' {
            i += 1;
            break;
        }
        self_closing = false;
        let attr_start = i;
        while i < len && !is_space(b[i]) && !matches!(b[i], b'=' | b'>' | b'/') {
            i += 1;
        }
        // A lone '=' or similar junk still has to make progress.
        if i == attr_start {
            i += 1;
            continue;
        }
        let attr_name = attr_start..i;
        let mut j = i;
        while j < len && is_space(b[j]) {
            j += 1;
        }
        let mut value = None;
        if j < len && b[j] == b'=' {
            j += 1;
            while j < len && is_space(b[j]) {
                j += 1;
            }
            if j < len && (b[j] == b'"' || b[j] == b'\'') {
                let quote = b[j];
                let start = j + 1;
                let close = b[start..].iter().position(|&c| c == quote).map_or(len, |k| start + k);
                value = Some(start..close);
                j = (close + 1).min(len);
            } else {
                let start = j;
                while j < len && !is_space(b[j]) && b[j] != b'>' {
                    j += 1;
                }
                value = Some(start..j);
            }
            i = j;
        }
        attrs.push((attr_name, value));
    }
    StartTag {
        name,
        name_end,
        end: i,
        self_closing,
        attrs,
    }
}

/// Start of the matching `</name` (ASCII case-insensitive), or the end of
/// the document.
fn find_raw_text_end(doc: &str, from: usize, name: &str) -> usize {
    let b = doc.as_bytes();
    let mut i = from;
    while let Some(k) = find_from(doc, i, "</") {
        let name_start = k + 2;
        let name_end = name_start + name.len();
        if name_end <= b.len()
            && b[name_start..name_end].eq_ignore_ascii_case(name.as_bytes())
            && (name_end == b.len() || matches!(b[name_end], b'>' | b'/') || b[name_end].is_ascii_whitespace())
        {
            return k;
        }
        i = k + 2;
    }
    doc.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Literal,
    Named,
    Numeric { hex: bool, upper_x: bool, upper_digits: bool },
}

#[derive(Debug, Clone)]
struct Unit {
    ch: char,
    src: Range<usize>,
    enc: Encoding,
}

enum Piece {
    Unit(Unit),
    /// An entity reference left alone.
    Opaque(Range<usize>),
}

fn parse_reference(doc: &str, pos: usize, end: usize) -> Option<Piece> {
    let rest = &doc[pos..end];
    let semi = rest.find(';')?;
    let body = &rest[1..semi];
    let src = pos..pos + semi + 1;
    if let Some(num) = body.strip_prefix('#') {
        let (digits, hex, upper_x) = match num.strip_prefix(['x', 'X']) {
            Some(h) => (h, true, num.starts_with('X')),
            None => (num, false, false),
        };
        let radix = if hex { 16 } else { 10 };
        if digits.is_empty() || !digits.chars().all(|c| c.is_digit(radix)) {
            return None;
        }
        let ch = u32::from_str_radix(digits, radix).ok().and_then(char::from_u32)?;
        let upper_digits = digits.chars().any(|c| c.is_ascii_uppercase());
        return Some(Piece::Unit(Unit {
            ch,
            src,
            enc: Encoding::Numeric { hex, upper_x, upper_digits },
        }));
    }
    let ch = match body {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        _ if !body.is_empty() && body.chars().all(|c| c.is_ascii_alphanumeric()) => {
            return Some(Piece::Opaque(src));
        }
        _ => return None,
    };
    Some(Piece::Unit(Unit {
        ch,
        src,
        enc: Encoding::Named,
    }))
}

fn push_escaped(out: &mut String, text: &str) {
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
}

fn push_numeric(out: &mut String, text: &str, hex: bool, upper_x: bool, upper_digits: bool) {
    for c in text.chars() {
        let n = c as u32;
        match (hex, upper_digits) {
            (false, _) => out.push_str(&format!("&#{n};")),
            (true, true) => out.push_str(&format!("&#{}{n:X};", if upper_x { 'X' } else { 'x' })),
            (true, false) => out.push_str(&format!("&#{}{n:x};", if upper_x { 'X' } else { 'x' })),
        }
    }
}

struct Converter<'a> {
    doc: &'a str,
    tr: &'a Transliterator,
    mode: Mode,
    out: String,
    report: TransliterationReport,
}

impl Converter<'_> {
    fn text_node(&mut self, range: Range<usize>) -> Result<()> {
        if range.is_empty() {
            return Ok(());
        }
        let mut units: Vec<Unit> = Vec::new();
        let mut pos = range.start;
        while pos < range.end {
            let ch = self.doc[pos..].chars().next().expect("pos is a char boundary");
            if ch == '&' {
                match parse_reference(self.doc, pos, range.end) {
                    Some(Piece::Unit(u)) => {
                        pos = u.src.end;
                        units.push(u);
                        continue;
                    }
                    Some(Piece::Opaque(src)) => {
                        self.chunk(&std::mem::take(&mut units))?;
                        self.out.push_str(&self.doc[src.clone()]);
                        self.report.tokens_passthrough += 1;
                        pos = src.end;
                        continue;
                    }
                    None => {}
                }
            }
            let next = pos + ch.len_utf8();
            units.push(Unit {
                ch,
                src: pos..next,
                enc: Encoding::Literal,
            });
            pos = next;
        }
        self.chunk(&units)
    }

    fn chunk(&mut self, units: &[Unit]) -> Result<()> {
        if units.is_empty() {
            return Ok(());
        }
        let mut decoded = String::new();
        let mut starts = Vec::with_capacity(units.len());
        for u in units {
            starts.push(decoded.len());
            decoded.push(u.ch);
        }
        let unit_at = |byte: usize| starts.partition_point(|&s| s < byte);
        let doc_offset = |byte: usize| units[unit_at(byte).min(units.len() - 1)].src.start;

        if !is_nfc(&decoded) {
            return self.fallback(&decoded, units[0].src.start);
        }
        let tokens = self.tr.segment(&decoded, self.mode).map_err(|e| match e {
            Error::UnknownChar { offset, ch } => Error::UnknownChar {
                offset: doc_offset(offset),
                ch,
            },
            other => other,
        })?;

        let mark = self.out.len();
        let mut decoded_out = String::new();
        let mut local = TransliterationReport::new(self.tr.direction(), self.tr.language(), self.mode);
        for token in &tokens {
            let (ua, ub) = (unit_at(token.span.start), unit_at(token.span.end));
            let piece = &units[ua..ub];
            let rendered = self.tr.render(&decoded, token);
            decoded_out.push_str(rendered);
            match token.kind {
                TokenKind::Mapped { folded, .. } => {
                    local.tokens_mapped += 1;
                    local.case_folded += usize::from(folded);
                    let numeric = piece.iter().find_map(|u| match u.enc {
                        Encoding::Numeric { hex, upper_x, upper_digits } => Some((hex, upper_x, upper_digits)),
                        _ => None,
                    });
                    match numeric {
                        Some((hex, upper_x, upper_digits)) => {
                            push_numeric(&mut self.out, rendered, hex, upper_x, upper_digits)
                        }
                        None => push_escaped(&mut self.out, rendered),
                    }
                }
                TokenKind::Delimiters | TokenKind::Unknown(_) => {
                    local.tokens_passthrough += 1;
                    if let TokenKind::Unknown(ch) = token.kind {
                        local.unknown.push(UnknownChar {
                            ch,
                            offset: piece[0].src.start,
                        });
                    }
                    let src = piece[0].src.start..piece[piece.len() - 1].src.end;
                    self.out.push_str(&self.doc[src]);
                }
            }
        }
        if !is_nfc(&decoded_out) {
            self.out.truncate(mark);
            return self.fallback(&decoded, units[0].src.start);
        }
        local.chars_in = units.len();
        local.chars_out = decoded_out.chars().count();
        self.report.absorb(&local, 0);
        Ok(())
    }

    /// Whole-chunk conversion when per-token byte mapping is not possible
    /// (input or output changes under composition). Entities come back in
    /// minimal form.
    fn fallback(&mut self, decoded: &str, doc_start: usize) -> Result<()> {
        let (converted, local) = self.tr.transliterate(decoded, self.mode).map_err(|e| match e {
            Error::UnknownChar { ch, .. } => Error::UnknownChar { offset: doc_start, ch },
            other => other,
        })?;
        push_escaped(&mut self.out, &converted);
        let mut local = local;
        for u in &mut local.unknown {
            u.offset = doc_start;
        }
        self.report.absorb(&local, 0);
        Ok(())
    }

    fn start_tag(&mut self, pos: usize, tag: &StartTag, inject: Option<&str>) {
        let Some(value) = inject else {
            self.out.push_str(&self.doc[pos..tag.end]);
            return;
        };
        let existing = tag
            .attrs
            .iter()
            .find(|(name, _)| self.doc[name.clone()].eq_ignore_ascii_case("dir"));
        match existing {
            Some((_, Some(v))) => {
                self.out.push_str(&self.doc[pos..v.start]);
                self.out.push_str(value);
                self.out.push_str(&self.doc[v.end..tag.end]);
            }
            Some((name, None)) => {
                self.out.push_str(&self.doc[pos..name.end]);
                self.out.push_str(&format!("=\"{value}\""));
                self.out.push_str(&self.doc[name.end..tag.end]);
            }
            None => {
                self.out.push_str(&self.doc[pos..tag.name_end]);
                self.out.push_str(&format!(" dir=\"{value}\""));
                self.out.push_str(&self.doc[tag.name_end..tag.end]);
            }
        }
    }
}

/// Converts the text content of an HTML document.
pub fn transliterate_html(
    input: &[u8],
    tr: &Transliterator,
    mode: Mode,
    options: &HtmlOptions,
) -> Result<(Vec<u8>, TransliterationReport)> {
    if let Some(bad) = options
        .skip_elements
        .iter()
        .find(|n| n.bytes().any(|b| !b.is_ascii() || b.is_ascii_uppercase()))
    {
        return Err(Error::Contract(format!("skip element name {bad:?} must be lowercase ASCII")));
    }
    let doc = std::str::from_utf8(input).map_err(|e| Error::Encoding {
        offset: e.valid_up_to(),
    })?;
    let mut conv = Converter {
        doc,
        tr,
        mode,
        out: String::with_capacity(doc.len() * 2),
        report: TransliterationReport::new(tr.direction(), tr.language(), mode),
    };
    let mut dir_pending = options.set_dir_attribute;
    let dir_value = match tr.direction() {
        Direction::LatinToAjami => "rtl",
        Direction::AjamiToLatin => "ltr",
    };

    let mut text_start = 0;
    let mut pos = 0;
    while pos < doc.len() {
        let Some(lt) = find_from(doc, pos, "<") else {
            break;
        };
        let Some(markup) = scan_markup(doc, lt) else {
            pos = lt + 1;
            continue;
        };
        conv.text_node(text_start..lt)?;
        match markup {
            Markup::Opaque { end } => {
                conv.out.push_str(&doc[lt..end]);
                pos = end;
            }
            Markup::StartTag(tag) => {
                let inject = std::mem::take(&mut dir_pending).then_some(dir_value);
                conv.start_tag(lt, &tag, inject);
                pos = tag.end;
                if !tag.self_closing && options.skip_elements.contains(&tag.name) {
                    let raw_end = find_raw_text_end(doc, pos, &tag.name);
                    conv.out.push_str(&doc[pos..raw_end]);
                    pos = raw_end;
                }
            }
        }
        text_start = pos;
    }
    conv.text_node(text_start..doc.len())?;
    Ok((conv.out.into_bytes(), conv.report))
}
