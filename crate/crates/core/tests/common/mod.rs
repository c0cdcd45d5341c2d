//! Brute-force reference implementations. None of these share code paths
//! with the library routines they check.
#![allow(dead_code)]

use rand::Rng;
use usageprof::score_model::{ScoreSeries, ScoreVector, Symbol, SymbolString, UiClass, NUM_CLASSES};

/// Pattern element as the oracle understands it.
#[derive(Debug, Clone)]
pub enum OracleAtom {
    Literal(char),
    NotIn(Vec<char>),
}

#[derive(Debug, Clone)]
pub struct OracleElement {
    pub atom: OracleAtom,
    pub min: usize,
    pub max: Option<usize>,
}

impl OracleAtom {
    fn accepts(&self, c: char) -> bool {
        match self {
            _ if c == Symbol::REMOVED_CHAR => false,
            OracleAtom::Literal(l) => *l == c,
            OracleAtom::NotIn(set) => !set.contains(&c),
        }
    }
}

pub fn render(elements: &[OracleElement]) -> String {
    let mut out = String::new();
    for e in elements {
        match &e.atom {
            OracleAtom::Literal(c) => out.push(*c),
            OracleAtom::NotIn(set) => {
                out.push_str("[^");
                out.extend(set);
                out.push(']');
            }
        }
        match e.max {
            Some(max) => out.push_str(&format!("{{{},{}}}", e.min, max)),
            None => out.push_str(&format!("{{{},}}", e.min)),
        }
    }
    out
}

/// Does `text` match the whole element list?
fn matches_exactly(elements: &[OracleElement], text: &[char]) -> bool {
    let Some((first, rest)) = elements.split_first() else {
        return text.is_empty();
    };
    let upper = first.max.unwrap_or(text.len()).min(text.len());
    (first.min..=upper).any(|count| {
        text[..count].iter().all(|&c| first.atom.accepts(c)) && matches_exactly(rest, &text[count..])
    })
}

/// Tries every span; the smallest start wins, then the largest end.
pub fn brute_force_find(elements: &[OracleElement], text: &str, from: usize) -> Option<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    for start in from..chars.len() {
        for end in (start + 1..=chars.len()).rev() {
            if matches_exactly(elements, &chars[start..end]) {
                return Some((start, end));
            }
        }
    }
    None
}

const SYMBOLS: [char; 6] = ['b', 'f', 'F', 'c', 'C', 'p'];

/// A random pattern shaped like one of the five action grammars, with random
/// classes and a random one-second quantum, or a short free-form pattern.
pub fn random_pattern(rng: &mut impl Rng) -> Vec<OracleElement> {
    let r = rng.gen_range(0..=4);
    let x = SYMBOLS[rng.gen_range(0..6)];
    let y = SYMBOLS[rng.gen_range(0..6)];
    let open = |atom, min| OracleElement { atom, min, max: None };
    let upto = |atom, max| OracleElement {
        atom,
        min: 0,
        max: Some(max),
    };
    match rng.gen_range(0..4) {
        0 => vec![open(OracleAtom::Literal(x), r)],
        1 => vec![
            open(OracleAtom::Literal(x), r),
            open(OracleAtom::Literal(y), r),
            upto(OracleAtom::Literal(x), r),
        ],
        2 => vec![
            open(OracleAtom::Literal(x), r),
            upto(OracleAtom::NotIn(vec![x, y]), r),
            open(OracleAtom::Literal(y), r),
        ],
        _ => (0..rng.gen_range(1..=3))
            .map(|_| {
                let atom = if rng.gen_bool(0.3) {
                    let mut set: Vec<char> = SYMBOLS.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
                    if set.is_empty() {
                        set.push(SYMBOLS[rng.gen_range(0..6)]);
                    }
                    OracleAtom::NotIn(set)
                } else {
                    OracleAtom::Literal(SYMBOLS[rng.gen_range(0..6)])
                };
                let min = rng.gen_range(0..=3);
                let max = rng.gen_bool(0.5).then(|| min + rng.gen_range(0..=3));
                OracleElement { atom, min, max }
            })
            .collect(),
    }
}

/// Random string over a few symbols, with occasional removed frames.
pub fn random_string(rng: &mut impl Rng, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    let alphabet: Vec<char> = (0..rng.gen_range(1..=3))
        .map(|_| SYMBOLS[rng.gen_range(0..6)])
        .collect();
    let sentinel_rate = if rng.gen_bool(0.3) { 0.1 } else { 0.0 };
    (0..len)
        .map(|_| {
            if rng.gen_bool(sentinel_rate) {
                Symbol::REMOVED_CHAR
            } else if rng.gen_bool(0.9) {
                alphabet[rng.gen_range(0..alphabet.len())]
            } else {
                SYMBOLS[rng.gen_range(0..6)]
            }
        })
        .collect()
}

pub fn parse_symbols(text: &str) -> SymbolString {
    text.parse().expect("oracle strings use the class alphabet")
}

/// 11-point interpolated AP written out literally: precision and recall at
/// every cut-off, recall thresholds compared in exact integer arithmetic.
pub fn brute_force_ap(entries: &[(f64, bool)], positives: usize) -> f64 {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    // stable: equal confidences keep input order
    order.sort_by(|&a, &b| entries[b].0.partial_cmp(&entries[a].0).unwrap());

    let mut points = Vec::new();
    let mut tp = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        if entries[i].1 {
            tp += 1;
        }
        points.push((tp, tp as f64 / (rank + 1) as f64));
    }
    let mut sum = 0.0;
    for level in 0..=10usize {
        // recall tp/positives >= level/10  <=>  10 tp >= level positives
        let best = points
            .iter()
            .filter(|(tp, _)| 10 * tp >= level * positives)
            .map(|&(_, p)| p)
            .fold(0.0, f64::max);
        sum += best;
    }
    sum / 11.0
}

/// Windowed mean computed frame by frame.
pub fn naive_smooth(series: &ScoreSeries, window_seconds: f64) -> Vec<[f64; NUM_CLASSES]> {
    let mut w = ((series.fps() * window_seconds).round() as usize).max(1);
    if w.is_multiple_of(2) {
        w += 1;
    }
    let half = (w / 2) as isize;
    let n = series.len() as isize;
    (0..n)
        .map(|i| {
            let mut acc = [0.0; NUM_CLASSES];
            let mut count = 0.0;
            for j in (i - half)..=(i + half) {
                if j < 0 || j >= n {
                    continue;
                }
                for (k, a) in acc.iter_mut().enumerate() {
                    *a += series.frames()[j as usize].scores()[k];
                }
                count += 1.0;
            }
            acc.map(|a| a / count)
        })
        .collect()
}

pub fn random_series(rng: &mut impl Rng, max_len: usize) -> ScoreSeries {
    let fps = [0.5, 1.0, 2.0, 3.0, 4.5, 10.0, 25.0, 30.0][rng.gen_range(0..8)];
    let len = rng.gen_range(1..=max_len);
    let frames = (0..len)
        .map(|i| {
            let mut row = [0.0; NUM_CLASSES];
            row.iter_mut().for_each(|x| *x = rng.gen::<f64>().powi(3));
            let sum: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= sum);
            ScoreVector::new(row, i).unwrap()
        })
        .collect();
    ScoreSeries::new("random", fps, frames).unwrap()
}

pub fn one_hot_series(fps: f64, symbols: &str) -> ScoreSeries {
    let frames = symbols
        .chars()
        .map(|c| ScoreVector::one_hot(UiClass::from_symbol(c).unwrap()))
        .collect();
    ScoreSeries::new("clip", fps, frames).unwrap()
}
