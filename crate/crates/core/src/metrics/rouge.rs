//! ROUGE-L over lowercased whitespace tokens.

pub const ROUGE_BETA: f64 = 1.2;

/// Longest common subsequence length, O(|a|·|b|) time and O(|b|) space.
pub fn lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row = vec![0usize; b.len()];
    for x in a {
        let (mut diag, mut left) = (0, 0);
        for (cell, y) in row.iter_mut().zip(b) {
            let up = *cell;
            left = if x == y { diag + 1 } else { up.max(left) };
            *cell = left;
            diag = up;
        }
    }
    row.last().copied().unwrap_or(0)
}

pub fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

pub fn rouge_l(pred: &str, gold: &str) -> f64 {
    let p = tokens(pred);
    let g = tokens(gold);
    let l = lcs(&p, &g);
    if l == 0 {
        return 0.0;
    }
    let recall = l as f64 / g.len() as f64;
    let precision = l as f64 / p.len() as f64;
    let b2 = ROUGE_BETA * ROUGE_BETA;
    (1.0 + b2) * precision * recall / (recall + b2 * precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(lcs(&[1, 2, 3, 4], &[1, 3]), 2);
        assert_eq!(rouge_l("a b c", "a b c"), 1.0);
        assert!((rouge_l("the page", "page arguments") - 0.5).abs() < 1e-12);
        let f = (1.0 + 1.44) * 0.5 / (1.0 + 1.44 * 0.5);
        assert!((rouge_l("a b c d", "a c") - f).abs() < 1e-12);
        assert_eq!(rouge_l("", "x"), 0.0);
    }
}
