use alloc::string::String;
use alloc::vec::Vec;

/// Which characters act as token separators besides whitespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strip {
    /// ASCII punctuation, except hyphens between letters.
    #[default]
    AsciiPunctuation,
    /// Everything that is not alphanumeric, except hyphens between letters.
    NonAlphanumeric,
    /// Whitespace only.
    Nothing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub strip: Strip,
    /// Minimum token length in characters; at least 1.
    pub min_length: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self { lowercase: true, strip: Strip::AsciiPunctuation, min_length: 1 }
    }
}

impl Strip {
    fn separates(self, c: char) -> bool {
        match self {
            Strip::AsciiPunctuation => c.is_ascii_punctuation() && c != '-',
            Strip::NonAlphanumeric => !c.is_alphanumeric() && c != '-',
            Strip::Nothing => false,
        }
    }
}

pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let min_length = config.min_length.max(1);
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        for piece in chunk.split(|c: char| config.strip.separates(c)) {
            let piece = if config.strip == Strip::Nothing { piece } else { piece.trim_matches('-') };
            if piece.chars().count() < min_length {
                continue;
            }
            out.push(if config.lowercase { piece.to_lowercase() } else { String::from(piece) });
        }
    }
    out
}
