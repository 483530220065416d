//! ASCII spellings of element labels: `X+` for `X⁺`, `R2` for `ℝ²`,
//! `B3c` for `B3ᶜ`, `empty` for `∅`, `N` for `ℕ`.

use effana::{EffectAlgebra, ElementId, Error, Result};

fn fold(name: &str) -> String {
    match name {
        "empty" | "{}" => return "∅".to_owned(),
        "R2" | "R^2" => return "ℝ²".to_owned(),
        "N" => return "ℕ".to_owned(),
        _ => {}
    }
    let mut out = String::with_capacity(name.len());
    let mut chars = name.chars().peekable();
    let mut prev_alpha = false;
    while let Some(c) = chars.next() {
        let mapped = match c {
            '+' if prev_alpha => '⁺',
            '-' if prev_alpha => '⁻',
            // trailing `c` after a digit marks a complement
            'c' if chars.peek().is_none() && out.chars().last().is_some_and(|p| p.is_ascii_digit()) => 'ᶜ',
            c => c,
        };
        prev_alpha = c.is_alphabetic();
        out.push(mapped);
    }
    out
}

/// Looks `name` up verbatim, then in its folded form.
pub fn resolve_element(l: &EffectAlgebra, name: &str) -> Result<ElementId> {
    l.lookup(name)
        .or_else(|_| l.lookup(&fold(name)))
        .map_err(|_| Error::UnknownElement(name.to_owned()))
}
