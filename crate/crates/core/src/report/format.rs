//! Human-readable renderings of percentages and durations.

use crate::num::{Fraction, Scalar};

/// Shown for a value that is undefined (empty denominator, no samples).
pub const UNDEFINED: &str = "—";

/// Nearest integer percent, `"<1%"` for any positive share under one percent,
/// `"—"` when undefined.
pub fn format_percent(f: &Fraction) -> String {
    if f.is_below_one_percent() {
        return "<1%".to_string();
    }
    match f.percent_rounded() {
        Some(p) => format!("{p}%"),
        None => UNDEFINED.to_string(),
    }
}

/// `"539 (10%)"`
pub fn format_count_percent(f: &Fraction) -> String {
    format!("{} ({})", f.numer(), format_percent(f))
}

/// `H:MM:SS` from one hour up, `MM:SS` below, to the nearest second.
pub fn format_duration<F: Scalar>(secs: Option<F>) -> String {
    match secs {
        Some(s) if s.is_finite() && s >= F::zero() => format_whole_secs(round_secs(s)),
        _ => UNDEFINED.to_string(),
    }
}

/// A signed duration difference, e.g. `"-7:11"` or `"+0:00:05"`.
pub fn format_signed_duration<F: Scalar>(secs: F) -> String {
    if !secs.is_finite() {
        return UNDEFINED.to_string();
    }
    let whole = round_secs(secs.abs());
    let sign = if secs < F::zero() && whole > 0 { '-' } else { '+' };
    format!("{sign}{}", format_whole_secs(whole))
}

fn round_secs<F: Scalar>(s: F) -> u64 {
    (s + F::from(0.5).expect("0.5 is representable")).floor().to_u64().unwrap_or(u64::MAX)
}

fn format_whole_secs(total: u64) -> String {
    let (h, m, s) = (total / 3600, total / 60 % 60, total % 60);
    if h > 0 {
        format!("{h}:{m:02}:{s:02}")
    } else {
        format!("{m:02}:{s:02}")
    }
}
