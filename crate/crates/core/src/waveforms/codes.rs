//! Character codes used to give the digital modes realistic bit framing.

use std::sync::OnceLock;

/// Characters ordered by (approximate) frequency in plain text. Varicode
/// codewords are handed out in this order, shortest first.
const VARICODE_ORDER: &str =
    " etaoinsrhldcumfpgwybvkxjqzETAOINSRHLDCUMFPGWYBVKXJQZ0123456789.,?!'-/:;()=+\"@&%#*<>$[]_\n";

/// PSK31-style varicode table: every codeword starts and ends with `1` and
/// contains no `00`, so the `00` character gap is unambiguous.
fn varicode_words() -> &'static Vec<Vec<bool>> {
    static WORDS: OnceLock<Vec<Vec<bool>>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut words = Vec::new();
        let mut len = 1;
        while words.len() < VARICODE_ORDER.chars().count() {
            // Enumerate valid words of this length, most ones first.
            let mut this_len: Vec<Vec<bool>> = (0u32..(1 << len))
                .map(|v| (0..len).rev().map(|b| v >> b & 1 == 1).collect::<Vec<bool>>())
                .filter(|w: &Vec<bool>| {
                    w[0] && w[len - 1] && !w.windows(2).any(|p| !p[0] && !p[1])
                })
                .collect();
            this_len.sort_by_key(|w| std::cmp::Reverse(w.iter().filter(|b| **b).count()));
            words.extend(this_len);
            len += 1;
        }
        words
    })
}

/// Varicode bits for `c` (without the trailing `00` separator).
pub fn varicode(c: char) -> Option<&'static [bool]> {
    VARICODE_ORDER
        .chars()
        .position(|o| o == c)
        .map(|i| varicode_words()[i].as_slice())
}

/// ITA2 (Baudot) letters-case code, bits in transmission order.
pub fn ita2(c: char) -> Option<[bool; 5]> {
    let code = match c.to_ascii_uppercase() {
        'A' => "11000",
        'B' => "10011",
        'C' => "01110",
        'D' => "10010",
        'E' => "10000",
        'F' => "10110",
        'G' => "01011",
        'H' => "00101",
        'I' => "01100",
        'J' => "11010",
        'K' => "11110",
        'L' => "01001",
        'M' => "00111",
        'N' => "00110",
        'O' => "00011",
        'P' => "01101",
        'Q' => "11101",
        'R' => "01010",
        'S' => "10100",
        'T' => "00001",
        'U' => "11100",
        'V' => "01111",
        'W' => "11001",
        'X' => "10111",
        'Y' => "10101",
        'Z' => "10001",
        ' ' => "00100",
        '\r' => "00010",
        '\n' => "01000",
        _ => return None,
    };
    let mut out = [false; 5];
    for (o, b) in out.iter_mut().zip(code.bytes()) {
        *o = b == b'1';
    }
    Some(out)
}

/// The 35 seven-bit words with exactly four marks (the SITOR-B/Navtex
/// constant-ratio alphabet), in ascending numeric order.
pub fn constant_ratio_words() -> &'static [[bool; 7]] {
    static WORDS: OnceLock<Vec<[bool; 7]>> = OnceLock::new();
    WORDS.get_or_init(|| {
        (0u32..128)
            .filter(|v| v.count_ones() == 4)
            .map(|v| {
                let mut w = [false; 7];
                for (i, b) in w.iter_mut().enumerate() {
                    *b = v >> (6 - i) & 1 == 1;
                }
                w
            })
            .collect()
    })
}

/// Code-word index of the phasing/idle signal used to fill the repeat
/// slots before the first character.
pub const CONSTANT_RATIO_IDLE: usize = 34;

/// Maps a letter or space to one of the 35 constant-ratio code words.
pub fn constant_ratio(c: char) -> Option<[bool; 7]> {
    let idx = match c.to_ascii_uppercase() {
        l @ 'A'..='Z' => l as usize - 'A' as usize,
        ' ' => 26,
        '\r' => 27,
        '\n' => 28,
        _ => return None,
    };
    Some(constant_ratio_words()[idx])
}

/// International Morse code for letters and digits (`.` dit, `-` dah).
pub fn morse(c: char) -> Option<&'static str> {
    Some(match c.to_ascii_uppercase() {
        'A' => ".-",
        'B' => "-...",
        'C' => "-.-.",
        'D' => "-..",
        'E' => ".",
        'F' => "..-.",
        'G' => "--.",
        'H' => "....",
        'I' => "..",
        'J' => ".---",
        'K' => "-.-",
        'L' => ".-..",
        'M' => "--",
        'N' => "-.",
        'O' => "---",
        'P' => ".--.",
        'Q' => "--.-",
        'R' => ".-.",
        'S' => "...",
        'T' => "-",
        'U' => "..-",
        'V' => "...-",
        'W' => ".--",
        'X' => "-..-",
        'Y' => "-.--",
        'Z' => "--..",
        '0' => "-----",
        '1' => ".----",
        '2' => "..---",
        '3' => "...--",
        '4' => "....-",
        '5' => ".....",
        '6' => "-....",
        '7' => "--...",
        '8' => "---..",
        '9' => "----.",
        _ => return None,
    })
}
