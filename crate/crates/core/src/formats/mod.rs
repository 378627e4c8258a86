//! Document-level conversion for plain text and HTML.

mod html;
mod text;

pub use html::{transliterate_html, HtmlOptions};
pub use text::{transliterate_text, transliterate_text_stream};
