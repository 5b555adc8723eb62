//! Canonical answer strings, prediction parsing, exact match, majority vote.
//!
//! All numeric comparison goes through [`Decimal`], an exact base-10
//! representation, so `"18"` vs `"18.0"` vs `"1,200."` never comes down to
//! float printing. Rounding is half away from zero throughout.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

/// An exact signed decimal: `mantissa * 10^(-scale)` with `scale >= 0` and
/// no trailing zeros in the fractional part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    mantissa: BigInt,
    scale: u32,
}

/// Exponents beyond this are rejected as answers rather than materialized.
const MAX_DECIMAL_EXPONENT: i64 = 10_000;

impl Decimal {
    /// Parse `[+-]?digits[.digits][e<exp>]` (both the integer and fraction
    /// parts may be empty, not both). Returns `None` for anything else.
    pub fn parse(s: &str) -> Option<Decimal> {
        let s = s.trim();
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return None;
        }
        let mut pos = 0;
        let neg = match bytes[0] {
            b'-' => {
                pos = 1;
                true
            }
            b'+' => {
                pos = 1;
                false
            }
            _ => false,
        };
        let mut digits = String::new();
        let mut frac_len: i64 = 0;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            digits.push(bytes[pos] as char);
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                digits.push(bytes[pos] as char);
                frac_len += 1;
                pos += 1;
            }
        }
        if digits.is_empty() {
            return None;
        }
        let mut exponent: i64 = 0;
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            pos += 1;
            let mut exp_str = String::new();
            if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                exp_str.push(bytes[pos] as char);
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                exp_str.push(bytes[pos] as char);
                pos += 1;
            }
            if pos == start {
                return None;
            }
            exponent = exp_str.parse().ok()?;
        }
        if pos != bytes.len() {
            return None;
        }
        if exponent.abs() > MAX_DECIMAL_EXPONENT {
            return None;
        }
        let mut mantissa: BigInt = digits.parse().ok()?;
        if neg {
            mantissa = -mantissa;
        }
        // value = mantissa * 10^(exponent - frac_len)
        let mut scale = frac_len - exponent;
        if scale < 0 {
            mantissa *= pow10((-scale) as u32);
            scale = 0;
        }
        Some(Decimal { mantissa, scale: scale as u32 }.normalized())
    }

    fn normalized(mut self) -> Decimal {
        if self.mantissa.is_zero() {
            return Decimal { mantissa: BigInt::zero(), scale: 0 };
        }
        let ten = BigInt::from(10);
        while self.scale > 0 && (&self.mantissa % &ten).is_zero() {
            self.mantissa /= &ten;
            self.scale -= 1;
        }
        self
    }

    /// Minimal decimal rendering: no exponent, no separators, no trailing
    /// fractional zeros, leading `-` for negatives.
    pub fn canonical(&self) -> String {
        if self.scale == 0 {
            return self.mantissa.to_string();
        }
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let digits = self.mantissa.abs().to_string();
        let scale = self.scale as usize;
        if digits.len() > scale {
            let (int_part, frac_part) = digits.split_at(digits.len() - scale);
            format!("{sign}{int_part}.{frac_part}")
        } else {
            format!("{sign}0.{}{digits}", "0".repeat(scale - digits.len()))
        }
    }

    /// `value * 10^digits`, rounded half away from zero. Two numbers are
    /// equal after rounding to `digits` decimal places iff these agree.
    pub fn round_scaled(&self, digits: u32) -> BigInt {
        if self.scale <= digits {
            &self.mantissa * pow10(digits - self.scale)
        } else {
            let q = pow10(self.scale - digits);
            let (quot, rem) = (self.mantissa.abs() / &q, self.mantissa.abs() % &q);
            let rounded = if BigInt::from(2) * rem >= q { quot + 1 } else { quot };
            if self.mantissa.is_negative() {
                -rounded
            } else {
                rounded
            }
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10).pow(e)
}

/// Normalize an answer-ish string (possibly with currency symbols, thousands
/// commas, a trailing period, or a percent sign) into canonical decimal form.
pub fn normalize_answer(s: &str) -> Option<String> {
    let cleaned: String = s
        .trim()
        .chars()
        .filter(|c| !matches!(c, '$' | '€' | '£' | ',' | '%' | ' '))
        .collect();
    let cleaned = cleaned.trim_end_matches('.');
    Decimal::parse(cleaned).map(|d| d.canonical())
}

/// Scan `text` for a model's numeric answer.
///
/// Takes the first number after the last (case-insensitive) "answer is"
/// marker; without a marker, falls back to the last number anywhere. Strips
/// currency symbols, thousands commas, trailing periods, and percent signs.
/// Returns `None` when no number exists.
pub fn extract_answer(text: &str) -> Option<String> {
    const MARKER: &str = "answer is";
    if let Some(at) = find_last_ascii_ci(text, MARKER) {
        let tail = &text[at + MARKER.len()..];
        if let Some(tok) = scan_numbers(tail).into_iter().next() {
            return normalize_answer(&tok);
        }
    }
    scan_numbers(text)
        .into_iter()
        .last()
        .and_then(|tok| normalize_answer(&tok))
}

/// Byte offset of the last ASCII-case-insensitive occurrence of `needle`.
fn find_last_ascii_ci(haystack: &str, needle: &str) -> Option<usize> {
    let h = haystack.as_bytes();
    let n = needle.as_bytes();
    if n.is_empty() || h.len() < n.len() {
        return None;
    }
    (0..=h.len() - n.len())
        .rev()
        .find(|&i| h[i..i + n.len()].eq_ignore_ascii_case(n))
}

/// All number-like tokens in order, as raw strings like `"-1,200.50"`.
fn scan_numbers(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if let Some((token, next)) = scan_number_at(&chars, i) {
            out.push(token);
            i = next;
        } else {
            i += 1;
        }
    }
    out
}

fn is_currency(c: char) -> bool {
    matches!(c, '$' | '€' | '£')
}

/// Try to read one number token starting at `chars[start]`. Accepts an
/// optional sign and currency prefix in either order, then digits with
/// thousands commas and at most one decimal point.
fn scan_number_at(chars: &[char], start: usize) -> Option<(String, usize)> {
    let mut i = start;
    let mut neg = false;
    // Sign and currency, at most one of each, in either order.
    for _ in 0..2 {
        match chars.get(i) {
            Some('-') if !neg => {
                neg = true;
                i += 1;
            }
            Some(&c) if is_currency(c) => {
                i += 1;
            }
            _ => break,
        }
    }
    let mut token = String::new();
    let mut seen_dot = false;
    while let Some(&c) = chars.get(i) {
        if c.is_ascii_digit() {
            token.push(c);
            i += 1;
        } else if c == ',' && !seen_dot && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
            // Thousands separator; drop it.
            i += 1;
        } else if c == '.' && !seen_dot && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
            token.push('.');
            seen_dot = true;
            i += 1;
        } else {
            break;
        }
    }
    if token.is_empty() || !token.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    if neg {
        token.insert(0, '-');
    }
    Some((token, i))
}

/// Errors from [`exact_match`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldUnparseable {
    pub gold: String,
}

impl fmt::Display for GoldUnparseable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gold answer `{}` does not parse as a number", self.gold)
    }
}

/// Numeric exact match: round both sides half away from zero to
/// `round_digits` decimal places and compare. An absent prediction never
/// matches.
pub fn exact_match(
    gold: &str,
    pred: Option<&str>,
    round_digits: u32,
) -> Result<bool, GoldUnparseable> {
    let gold_dec = normalize_answer(gold)
        .and_then(|c| Decimal::parse(&c))
        .ok_or_else(|| GoldUnparseable { gold: gold.to_string() })?;
    let Some(pred) = pred else {
        return Ok(false);
    };
    let Some(pred_dec) = normalize_answer(pred).and_then(|c| Decimal::parse(&c)) else {
        return Ok(false);
    };
    Ok(gold_dec.round_scaled(round_digits) == pred_dec.round_scaled(round_digits))
}

/// Majority vote over parsed answers: answers are grouped by numeric value
/// after rounding, the most frequent bloc wins, and ties break to the bloc
/// seen first. Unparseable and absent answers carry no vote. Returns the
/// canonical string of the winning bloc's first member.
pub fn majority_vote(parsed: &[Option<String>], round_digits: u32) -> Option<String> {
    struct Bloc {
        key: BigInt,
        count: usize,
        first: String,
    }
    let mut blocs: Vec<Bloc> = Vec::new();
    for item in parsed.iter().flatten() {
        let Some(canon) = normalize_answer(item) else {
            continue;
        };
        let Some(dec) = Decimal::parse(&canon) else {
            continue;
        };
        let key = dec.round_scaled(round_digits);
        match blocs.iter_mut().find(|b| b.key == key) {
            Some(b) => b.count += 1,
            None => blocs.push(Bloc { key, count: 1, first: canon }),
        }
    }
    blocs
        .into_iter()
        .fold(None::<Bloc>, |best, b| match best {
            Some(cur) if cur.count >= b.count => Some(cur),
            _ => Some(b),
        })
        .map(|b| b.first)
}
