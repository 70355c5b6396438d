//! Random transmitted content. Only the statistics and framing matter; the
//! content is never meant to be decoded.

use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    RandomText,
    RandomBits,
    SyntheticAudio,
    SyntheticImageLines,
}

/// Deterministic content source for one waveform.
#[derive(Debug, Clone)]
pub struct PayloadSource {
    pub kind: PayloadKind,
    rng: RngStream,
}

// English letter frequencies (per mille), a..z.
const LETTER_WEIGHTS: [u32; 26] = [
    82, 15, 28, 43, 127, 22, 20, 61, 70, 2, 8, 40, 24, 67, 75, 19, 1, 60, 63, 91, 28, 10, 24, 2,
    20, 1,
];

impl PayloadSource {
    pub fn new(kind: PayloadKind, rng: RngStream) -> Self {
        Self { kind, rng }
    }

    pub fn rng(&mut self) -> &mut RngStream {
        &mut self.rng
    }

    fn letter(&mut self) -> char {
        let total: u32 = LETTER_WEIGHTS.iter().sum();
        let mut pick = self.rng.index(total as usize) as u32;
        for (i, w) in LETTER_WEIGHTS.iter().enumerate() {
            if pick < *w {
                return (b'a' + i as u8) as char;
            }
            pick -= w;
        }
        'e'
    }

    /// A random word of 1–8 letters.
    pub fn word(&mut self) -> String {
        let len = 1 + self.rng.index(8);
        (0..len).map(|_| self.letter()).collect()
    }

    /// Random text of at least `min_chars` characters: lower-case words with
    /// occasional capitals, digits and punctuation.
    pub fn text(&mut self, min_chars: usize) -> String {
        let mut s = String::with_capacity(min_chars + 16);
        while s.chars().count() < min_chars {
            let mut w = self.word();
            if self.rng.bernoulli(0.08) {
                w = w.to_uppercase();
            }
            s.push_str(&w);
            match self.rng.index(20) {
                0 => s.push('.'),
                1 => s.push(','),
                2 => s.push_str(&self.rng.index(100).to_string()),
                _ => {}
            }
            s.push(' ');
        }
        s
    }

    /// Upper-case letters and spaces only (Baudot/Morse/Navtex alphabets).
    pub fn plain_text(&mut self, min_chars: usize) -> String {
        let mut s = String::with_capacity(min_chars + 16);
        while s.len() < min_chars {
            s.push_str(&self.word().to_uppercase());
            s.push(' ');
        }
        s
    }

    pub fn bits(&mut self, n: usize) -> Vec<bool> {
        (0..n).map(|_| self.rng.bernoulli(0.5)).collect()
    }

    /// `n` uniform symbols from an alphabet of size `m`.
    pub fn symbols(&mut self, n: usize, m: usize) -> Vec<usize> {
        (0..n).map(|_| self.rng.index(m)).collect()
    }
}
