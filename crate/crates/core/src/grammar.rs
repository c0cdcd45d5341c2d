//! A small pattern matcher over the class alphabet.
//!
//! Supported syntax is a concatenation of atoms, each optionally followed by a
//! bounded or open repetition:
//!
//! * a class symbol (`b f F c C p`),
//! * a negated class `[^cC]`, matching any class symbol outside the set,
//! * `{a,}` (at least `a`) or `{a,b}` (between `a` and `b`); an atom without a
//!   quantifier occurs exactly once.
//!
//! Matching is leftmost-longest: the earliest start wins, and among matches at
//! that start the one reaching furthest. Matches are never empty. Removed frames
//! (see [`remove`]) are matched by no atom, so no match can span them.

use std::fmt;

use crate::error::{Error, Result};
use crate::score_model::{Symbol, SymbolString, UiClass, NUM_CLASSES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Literal(UiClass),
    /// Matches any class not in the set, indexed by [`UiClass::index`].
    NotIn([bool; NUM_CLASSES]),
}

impl Atom {
    pub fn matches(&self, symbol: Symbol) -> bool {
        match (self, symbol) {
            (_, Symbol::Removed) => false,
            (Atom::Literal(want), Symbol::Class(got)) => *want == got,
            (Atom::NotIn(set), Symbol::Class(got)) => !set[got.index()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantifier {
    pub min: usize,
    /// `None` is unbounded.
    pub max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element {
    pub atom: Atom,
    pub quantifier: Quantifier,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    elements: Vec<Element>,
}

/// Half-open frame span `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Match {
    pub start: usize,
    pub end: usize,
}

impl Match {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn overlaps(&self, other: &Match) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl Pattern {
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Leftmost-longest non-empty match starting at or after `from`.
    pub fn find_leftmost(&self, s: &SymbolString, from: usize) -> Option<Match> {
        let symbols = s.symbols();
        let n = symbols.len();
        if from >= n {
            return None;
        }

        // reach[p]: furthest end at which the remaining elements match from p
        let mut reach: Vec<Option<usize>> = (0..=n).map(Some).collect();
        let mut run = vec![0usize; n + 1];
        for element in self.elements.iter().rev() {
            for p in (0..n).rev() {
                run[p] = if element.atom.matches(symbols[p]) {
                    run[p + 1] + 1
                } else {
                    0
                };
            }
            let table = RangeMax::new(&reach);
            let min = element.quantifier.min;
            reach = (0..=n)
                .map(|p| {
                    let longest = element.quantifier.max.map_or(run[p], |m| m.min(run[p]));
                    if min > longest {
                        None
                    } else {
                        table.query(p + min, p + longest)
                    }
                })
                .collect();
        }

        (from..n).find_map(|start| match reach[start] {
            Some(end) if end > start => Some(Match { start, end }),
            _ => None,
        })
    }

    /// All non-overlapping leftmost-longest matches, scanning left to right.
    pub fn find_iter<'a>(&'a self, s: &'a SymbolString) -> impl Iterator<Item = Match> + 'a {
        let mut from = 0;
        std::iter::from_fn(move || {
            let m = self.find_leftmost(s, from)?;
            from = m.end;
            Some(m)
        })
    }
}

/// Sparse table answering inclusive range-maximum queries in O(1).
struct RangeMax {
    levels: Vec<Vec<Option<usize>>>,
}

impl RangeMax {
    fn new(values: &[Option<usize>]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut width = 1;
        while width * 2 <= values.len() {
            let prev = levels.last().unwrap();
            let next = (0..=values.len() - width * 2)
                .map(|i| prev[i].max(prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        RangeMax { levels }
    }

    fn query(&self, lo: usize, hi: usize) -> Option<usize> {
        let span = hi - lo + 1;
        let level = (usize::BITS - 1 - span.leading_zeros()) as usize;
        let row = &self.levels[level];
        row[lo].max(row[hi + 1 - (1 << level)])
    }
}

/// Returns a copy of `s` with the frames in `m` replaced by the removal sentinel.
pub fn remove(s: &SymbolString, m: Match) -> Result<SymbolString> {
    let mut out = s.clone();
    remove_in_place(&mut out, m)?;
    Ok(out)
}

pub fn remove_in_place(s: &mut SymbolString, m: Match) -> Result<()> {
    if m.start >= m.end || m.end > s.len() {
        return Err(Error::MatchOutOfRange {
            start: m.start,
            end: m.end,
            len: s.len(),
        });
    }
    s.symbols_mut()[m.start..m.end].fill(Symbol::Removed);
    Ok(())
}

impl std::str::FromStr for Pattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        compile(text)
    }
}

/// Parses pattern text into a [`Pattern`].
pub fn compile(text: &str) -> Result<Pattern> {
    let chars: Vec<char> = text.chars().collect();
    let fail = |pos: usize, reason: &str| Error::Pattern {
        pos,
        reason: reason.to_string(),
    };
    let class_at = |pos: usize| {
        chars
            .get(pos)
            .and_then(|&c| UiClass::from_symbol(c))
            .ok_or_else(|| fail(pos, "unknown symbol"))
    };

    let mut elements = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let atom = if chars[pos] == '[' {
            if chars.get(pos + 1) != Some(&'^') {
                return Err(fail(pos + 1, "only negated classes [^...] are supported"));
            }
            pos += 2;
            let mut set = [false; NUM_CLASSES];
            let open = pos;
            while chars.get(pos) != Some(&']') {
                if pos >= chars.len() {
                    return Err(fail(pos, "unterminated class"));
                }
                set[class_at(pos)?.index()] = true;
                pos += 1;
            }
            if pos == open {
                return Err(fail(pos, "empty class"));
            }
            pos += 1;
            Atom::NotIn(set)
        } else {
            let class = class_at(pos)?;
            pos += 1;
            Atom::Literal(class)
        };

        let quantifier = if chars.get(pos) == Some(&'{') {
            let close = chars[pos..]
                .iter()
                .position(|&c| c == '}')
                .map(|off| pos + off)
                .ok_or_else(|| fail(pos, "unterminated quantifier"))?;
            let body: String = chars[pos + 1..close].iter().collect();
            let (lo, hi) = body
                .split_once(',')
                .ok_or_else(|| fail(pos, "quantifier must be {a,} or {a,b}"))?;
            let parse = |s: &str| {
                if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
                    s.parse::<usize>().map_err(|_| fail(pos, "bound out of range"))
                } else {
                    Err(fail(pos, "malformed quantifier bound"))
                }
            };
            let min = parse(lo)?;
            let max = if hi.is_empty() { None } else { Some(parse(hi)?) };
            if max.is_some_and(|max| max < min) {
                return Err(fail(pos, "lower bound exceeds upper bound"));
            }
            pos = close + 1;
            Quantifier { min, max }
        } else {
            Quantifier {
                min: 1,
                max: Some(1),
            }
        };
        elements.push(Element { atom, quantifier });
    }

    if elements.is_empty() {
        return Err(fail(0, "empty pattern"));
    }
    Ok(Pattern { elements })
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for element in &self.elements {
            match element.atom {
                Atom::Literal(class) => write!(f, "{class}")?,
                Atom::NotIn(set) => {
                    write!(f, "[^")?;
                    for class in UiClass::ALL.iter().filter(|c| set[c.index()]) {
                        write!(f, "{class}")?;
                    }
                    write!(f, "]")?;
                }
            }
            match element.quantifier {
                Quantifier {
                    min: 1,
                    max: Some(1),
                } => {}
                Quantifier { min, max: None } => write!(f, "{{{min},}}")?,
                Quantifier {
                    min,
                    max: Some(max),
                } => write!(f, "{{{min},{max}}}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> SymbolString {
        s.parse().unwrap()
    }

    #[test]
    fn compiles_open_repetition() {
        let p = compile("f{2,}").unwrap();
        assert_eq!(
            p.elements(),
            &[Element {
                atom: Atom::Literal(UiClass::FontWindow),
                quantifier: Quantifier { min: 2, max: None },
            }]
        );
    }

    #[test]
    fn compiles_negated_class() {
        let p = compile("c{2,}[^cC]{0,2}C{2,}").unwrap();
        assert_eq!(p.elements().len(), 3);
        let mut set = [false; NUM_CLASSES];
        set[UiClass::ColumnDropdown.index()] = true;
        set[UiClass::ColumnWindow.index()] = true;
        assert_eq!(
            p.elements()[1],
            Element {
                atom: Atom::NotIn(set),
                quantifier: Quantifier {
                    min: 0,
                    max: Some(2)
                },
            }
        );
        assert_eq!(p.to_string(), "c{2,}[^cC]{0,2}C{2,}");
    }

    #[test]
    fn compile_errors() {
        for bad in ["f{3,1}", "", "x{1,}", "f{1}", "f{a,}", "f{1,", "[cC]", "[^]", "[^c", "f{,2}"] {
            assert!(compile(bad).is_err(), "{bad:?} should not compile");
        }
    }

    #[test]
    fn leftmost_longest_examples() {
        let p = compile("f{2,}").unwrap();
        assert_eq!(p.find_leftmost(&sym("bbfffb"), 0), Some(Match { start: 2, end: 5 }));

        let p = compile("f{2,}F{2,}f{0,2}").unwrap();
        assert_eq!(p.find_leftmost(&sym("ffFFf"), 0), Some(Match { start: 0, end: 5 }));

        let p = compile("c{2,}").unwrap();
        assert_eq!(p.find_leftmost(&sym("bbbb"), 0), None);
    }

    #[test]
    fn from_index_and_bounds() {
        let p = compile("c{1,}").unwrap();
        let s = sym("ccbcc");
        assert_eq!(p.find_leftmost(&s, 1), Some(Match { start: 1, end: 2 }));
        assert_eq!(p.find_leftmost(&s, 2), Some(Match { start: 3, end: 5 }));
        assert_eq!(p.find_leftmost(&s, 5), None);
        assert_eq!(p.find_iter(&s).collect::<Vec<_>>().len(), 2);
    }

    #[test]
    fn never_matches_empty() {
        let p = compile("f{0,2}").unwrap();
        assert_eq!(p.find_leftmost(&sym("bbb"), 0), None);
        assert_eq!(p.find_leftmost(&sym("bfb"), 0), Some(Match { start: 1, end: 2 }));
    }

    #[test]
    fn removal_examples() {
        let s = sym("ffFFf");
        assert_eq!(remove(&s, Match { start: 0, end: 5 }).unwrap().to_string(), "·····");

        let s = remove(&sym("bccCb"), Match { start: 1, end: 3 }).unwrap();
        assert_eq!(s.to_string(), "b··Cb");
        assert_eq!(compile("c{1,}C{1,}").unwrap().find_leftmost(&s, 0), None);

        assert!(remove(&sym("bb"), Match { start: 1, end: 3 }).is_err());
        assert!(remove(&sym("bb"), Match { start: 1, end: 1 }).is_err());
    }

    #[test]
    fn negated_class_skips_sentinel() {
        let p = compile("[^cC]{1,}").unwrap();
        assert_eq!(p.find_leftmost(&sym("··bf·"), 0), Some(Match { start: 2, end: 4 }));
    }
}
