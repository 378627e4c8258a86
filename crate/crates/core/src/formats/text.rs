use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::transducer::{Mode, TransliterationReport, Transliterator};

/// Converts a UTF-8 stream line by line.
///
/// Lines are split on `\n`; a trailing `\r` is carried through untouched, so
/// the output has exactly the input's line structure. Unknown-character
/// offsets in the report are byte offsets into the input stream (exact when
/// each line is already in composed form).
pub fn transliterate_text_stream<R: BufRead, W: Write>(
    mut input: R,
    mut output: W,
    tr: &Transliterator,
    mode: Mode,
) -> Result<TransliterationReport> {
    let mut report = TransliterationReport::new(tr.direction(), tr.language(), mode);
    let mut buf = Vec::new();
    let mut offset = 0usize;
    let mut line_no = 0usize;
    loop {
        buf.clear();
        let n = input.read_until(b'\n', &mut buf)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|e| Error::Encoding {
            offset: offset + e.valid_up_to(),
        })?;
        let (body, newline) = match line.strip_suffix('\n') {
            Some(body) => (body, "\n"),
            None => (line, ""),
        };
        let (body, cr) = match body.strip_suffix('\r') {
            Some(body) => (body, "\r"),
            None => (body, ""),
        };

        let (converted, line_report) = tr.transliterate(body, mode).map_err(|e| match e {
            Error::UnknownChar { offset, ch } => Error::UnknownCharAt {
                line: line_no,
                column: body.get(..offset).map_or(offset, |p| p.chars().count()) + 1,
                ch,
            },
            other => other,
        })?;
        output.write_all(converted.as_bytes())?;
        output.write_all(cr.as_bytes())?;
        output.write_all(newline.as_bytes())?;

        report.absorb(&line_report, offset);
        let line_breaks = cr.len() + newline.len();
        report.chars_in += line_breaks;
        report.chars_out += line_breaks;
        report.tokens_passthrough += usize::from(line_breaks > 0);
        offset += n;
    }
    output.flush()?;
    Ok(report)
}

/// In-memory convenience wrapper around [`transliterate_text_stream`].
pub fn transliterate_text(input: &[u8], tr: &Transliterator, mode: Mode) -> Result<(Vec<u8>, TransliterationReport)> {
    let mut out = Vec::with_capacity(input.len() * 2);
    let report = transliterate_text_stream(input, &mut out, tr, mode)?;
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{Context, MappingTable, Rule};
    use crate::transducer::Direction;

    fn tr() -> Transliterator {
        let t = MappingTable::new(
            "t",
            vec![
                Rule::new("g", "گ", Context::Any),
                Rule::new("a", "\u{064E}", Context::Any),
                Rule::new("r", "ر", Context::Any),
                Rule::new("b", "ب", Context::Any),
            ],
        );
        Transliterator::new(&t, Direction::LatinToAjami).unwrap()
    }

    #[test]
    fn lines_map_one_to_one() {
        let (out, report) = transliterate_text(b"garab\r\nbag\n\nrab", &tr(), Mode::Strict).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "گَرَب\r\nبَگ\n\nرَب");
        assert_eq!(report.tokens_mapped, 5 + 3 + 3);
        assert_eq!(report.chars_in, 15);
    }

    #[test]
    fn empty_stream() {
        let (out, report) = transliterate_text(b"", &tr(), Mode::Strict).unwrap();
        assert!(out.is_empty());
        assert_eq!(report.chars_in, 0);
        assert_eq!(report.tokens_mapped + report.tokens_passthrough, 0);
    }

    #[test]
    fn invalid_utf8_offset() {
        let err = transliterate_text(b"gab\nga\xffb\n", &tr(), Mode::Lenient).unwrap_err();
        assert!(matches!(err, Error::Encoding { offset: 6 }));
    }

    #[test]
    fn strict_error_has_line_and_column() {
        let err = transliterate_text("gab\nbàxa\n".as_bytes(), &tr(), Mode::Strict).unwrap_err();
        assert!(matches!(err, Error::UnknownCharAt { line: 2, column: 2, ch: 'à' }), "{err:?}");
    }

    #[test]
    fn lenient_offsets_are_stream_offsets() {
        let (_, report) = transliterate_text(b"gab\nbzg\n", &tr(), Mode::Lenient).unwrap();
        assert_eq!(report.unknown.len(), 1);
        assert_eq!(report.unknown[0].offset, 5);
    }
}
