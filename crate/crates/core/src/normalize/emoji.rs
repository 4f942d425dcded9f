//! Emoji detection over code points.
//!
//! An emoji unit starts at a code point with `Emoji_Presentation`, or at any
//! `Emoji` code point immediately followed by U+FE0F. The unit then absorbs
//! trailing presentation selectors, skin-tone modifiers, keycap marks, tag
//! characters, a second regional indicator (flags), and ZWJ-joined emoji.

use unicode_properties::{EmojiStatus, UnicodeEmoji};

const VS16: char = '\u{FE0F}';
const ZWJ: char = '\u{200D}';
const KEYCAP: char = '\u{20E3}';

fn has_presentation(c: char) -> bool {
    matches!(
        c.emoji_status(),
        EmojiStatus::EmojiPresentation
            | EmojiStatus::EmojiPresentationAndModifierBase
            | EmojiStatus::EmojiPresentationAndEmojiComponent
            | EmojiStatus::EmojiPresentationAndModifierAndEmojiComponent
    )
}

fn is_emoji(c: char) -> bool {
    !matches!(
        c.emoji_status(),
        EmojiStatus::NonEmoji | EmojiStatus::NonEmojiButEmojiComponent
    )
}

fn is_skin_tone(c: char) -> bool {
    ('\u{1F3FB}'..='\u{1F3FF}').contains(&c)
}

fn is_regional_indicator(c: char) -> bool {
    ('\u{1F1E6}'..='\u{1F1FF}').contains(&c)
}

fn is_tag(c: char) -> bool {
    ('\u{E0020}'..='\u{E007F}').contains(&c)
}

/// Length in chars of the emoji unit starting at `chars[start]`, or 0.
fn unit_len(chars: &[char], start: usize) -> usize {
    let c = chars[start];
    let next = chars.get(start + 1).copied();
    let opens = has_presentation(c) || (is_emoji(c) && next == Some(VS16));
    if !opens {
        return 0;
    }
    let mut end = start + 1;
    if is_regional_indicator(c) && next.is_some_and(is_regional_indicator) {
        end += 1;
    }
    loop {
        match chars.get(end).copied() {
            Some(m) if m == VS16 || m == KEYCAP || is_tag(m) => end += 1,
            Some(m) if is_skin_tone(m) => end += 1,
            Some(ZWJ) if chars.get(end + 1).copied().is_some_and(is_emoji) => end += 2,
            _ => break,
        }
    }
    end - start
}

/// Byte ranges of every emoji unit in `text`, in order.
pub(crate) fn emoji_spans(text: &str) -> Vec<(usize, usize)> {
    let indexed: Vec<(usize, char)> = text.char_indices().collect();
    let chars: Vec<char> = indexed.iter().map(|&(_, c)| c).collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let len = unit_len(&chars, i);
        if len == 0 {
            i += 1;
            continue;
        }
        let from = indexed[i].0;
        let to = indexed
            .get(i + len)
            .map(|&(b, _)| b)
            .unwrap_or(text.len());
        spans.push((from, to));
        i += len;
    }
    spans
}

/// Number of emoji units in `text`. Skin-tone modifiers and ZWJ sequences
/// count as part of the emoji they attach to.
pub fn count_emoji(text: &str) -> usize {
    emoji_spans(text).len()
}

/// Replaces every emoji unit with a single space, leaving other text intact.
pub(crate) fn blank_emoji(text: &str) -> String {
    let spans = emoji_spans(text);
    if spans.is_empty() {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (from, to) in spans {
        out.push_str(&text[last..from]);
        out.push(' ');
        last = to;
    }
    out.push_str(&text[last..]);
    out
}
