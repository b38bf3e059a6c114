//! Independent reference implementations used by the property tests.
//! Nothing here calls into the library's scoring or statistics code.
#![allow(dead_code)]

/// Cosine similarity computed from raw vectors.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Mean of the six pairwise cosines of a quartet.
pub fn quartet_mean(vs: [&[f64]; 4]) -> f64 {
    let mut total = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            total += cosine(vs[i], vs[j]);
        }
    }
    total / 6.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pick {
    pub words: Vec<String>,
    pub similarity: f64,
}

/// Brute-force color selection over every quartet of an 8-word pool.
/// Returns yellow, green, blue, purple. Scores within 1e-12 tie and go to
/// the smaller sorted tuple.
pub fn brute_colors(words: &[String], vectors: &[Vec<f64>]) -> [Pick; 4] {
    let n = words.len();
    let mut all: Vec<Pick> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let idx = [a, b, c, d];
                    let mut ws: Vec<String> = idx.iter().map(|&i| words[i].to_lowercase()).collect();
                    ws.sort();
                    let s = quartet_mean([&vectors[a], &vectors[b], &vectors[c], &vectors[d]]);
                    all.push(Pick { words: ws, similarity: s });
                }
            }
        }
    }
    let best = |key: &dyn Fn(&Pick) -> f64| -> Pick {
        let mut winner = all[0].clone();
        for p in &all[1..] {
            let (kp, kw) = (key(p), key(&winner));
            let tied = (kp - kw).abs() <= 1e-12;
            if (!tied && kp < kw) || (tied && p.words < winner.words) {
                winner = p.clone();
            }
        }
        winner
    };
    let yellow = best(&|p| -p.similarity);
    let purple = best(&|p| p.similarity);
    let (hi, lo) = (yellow.similarity, purple.similarity);
    let green_t = lo + (hi - lo) / 3.0;
    let blue_t = lo + 2.0 * (hi - lo) / 3.0;
    let green = best(&|p| (p.similarity - green_t).abs());
    let blue = best(&|p| (p.similarity - blue_t).abs());
    [yellow, green, blue, purple]
}

/// Pearson chi-squared statistic written as sum(O^2/E) - N.
pub fn chi_statistic(counts: &[Vec<u64>]) -> f64 {
    let rows: Vec<f64> = counts.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..counts[0].len())
        .map(|j| counts.iter().map(|r| r[j]).sum::<u64>() as f64)
        .collect();
    let n: f64 = rows.iter().sum();
    let mut acc = 0.0;
    for (i, r) in counts.iter().enumerate() {
        for (j, &o) in r.iter().enumerate() {
            let e = rows[i] * cols[j] / n;
            acc += (o as f64) * (o as f64) / e;
        }
    }
    acc - n
}

/// ln Gamma(a) for a positive multiple of 1/2, from the exact factorial forms.
pub fn ln_gamma_half(a: f64) -> f64 {
    let twice = (2.0 * a).round() as u64;
    assert!(twice >= 1 && (2.0 * a - twice as f64).abs() < 1e-12);
    if twice.is_multiple_of(2) {
        // Gamma(n) = (n-1)!
        (1..twice / 2).map(|k| (k as f64).ln()).sum()
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(x+1) = x Gamma(x)
        let mut acc = 0.5 * std::f64::consts::PI.ln();
        let mut x = 0.5;
        while x < a - 1e-9 {
            acc += x.ln();
            x += 1.0;
        }
        acc
    }
}

/// Upper tail of the chi-squared distribution with `df` degrees of
/// freedom, via the power series of the lower incomplete gamma function.
pub fn chi_sf(x: f64, df: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let a = df as f64 / 2.0;
    let z = x / 2.0;
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut k = 1.0;
    while term > sum * 1e-17 && k < 100_000.0 {
        term *= z / (a + k);
        sum += term;
        k += 1.0;
    }
    let lower = (a * z.ln() - z - ln_gamma_half(a) + sum.ln()).exp();
    (1.0 - lower).clamp(0.0, 1.0)
}

/// Levenshtein distance by the textbook dynamic program.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn gamma_and_tail_reference_values() {
        assert!((ln_gamma_half(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-12);
        assert!((ln_gamma_half(5.0) - 24f64.ln()).abs() < 1e-12);
        // df=2 has the closed form exp(-x/2)
        for x in [0.1, 1.0, 5.0, 20.0] {
            assert!((chi_sf(x, 2) - (-x / 2.0f64).exp()).abs() < 1e-12);
        }
        // tabulated 95th percentile for df=4
        assert!((chi_sf(9.487729, 4) - 0.05).abs() < 1e-6);
    }
}
