mod common;

use proptest::prelude::*;

use common::*;
use usageprof::decoder::{ActionGrammar, Decoder, ExecutionPath};
use usageprof::grammar::{self, Match};
use usageprof::score_model::{ScoreSeries, ScoreVector, UiClass};
use usageprof::synth::{generate_clip, min_frames};
use usageprof::{compile, decode_batch, Execution};

fn symbol_runs() -> impl Strategy<Value = String> {
    proptest::collection::vec((0usize..6, 1usize..8), 1..10).prop_map(|runs| {
        runs.into_iter()
            .map(|(k, n)| UiClass::ALL[k].symbol().to_string().repeat(n))
            .collect()
    })
}

fn noisy_series() -> impl Strategy<Value = ScoreSeries> {
    (
        proptest::sample::select(vec![1.0, 2.0, 3.0, 5.0]),
        symbol_runs(),
        proptest::collection::vec(0.0f64..0.3, 64),
    )
        .prop_map(|(fps, text, jitter)| {
            let frames = text
                .chars()
                .enumerate()
                .map(|(i, c)| {
                    let class = UiClass::from_symbol(c).unwrap();
                    ScoreVector::peaked(class, jitter[i % jitter.len()])
                })
                .collect();
            ScoreSeries::new("p", fps, frames).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grammar_agrees_with_exhaustive_matcher(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let elements = random_pattern(&mut rng);
        let text = random_string(&mut rng, 30);
        let pattern = compile(&render(&elements)).unwrap();
        let got = pattern.find_leftmost(&parse_symbols(&text), 0).map(|m| (m.start, m.end));
        prop_assert_eq!(got, brute_force_find(&elements, &text, 0));
    }

    #[test]
    fn removal_keeps_length_and_blocks_later_matches(text in symbol_runs(), start in 0usize..40, len in 1usize..10) {
        let s = parse_symbols(&text);
        prop_assume!(start < s.len());
        let m = Match { start, end: (start + len).min(s.len()) };
        let removed = grammar::remove(&s, m).unwrap();
        prop_assert_eq!(removed.len(), s.len());
        for p in ["[^p]{1,}", "b{1,}", "c{0,}C{0,}f{1,}"] {
            let pattern = compile(p).unwrap();
            for hit in pattern.find_iter(&removed) {
                prop_assert!(!hit.overlaps(&m));
            }
        }
    }

    #[test]
    fn beta_span_never_shared_with_alpha(series in noisy_series()) {
        let trace = Decoder::default().trace(&series).unwrap();
        for beta in trace.hits.iter().filter(|h| h.path == ExecutionPath::Beta) {
            for alpha in trace.hits.iter().filter(|h| h.path == ExecutionPath::Alpha) {
                prop_assert!(!beta.span.overlaps(&alpha.span));
            }
        }
        for (i, a) in trace.hits.iter().enumerate() {
            for b in &trace.hits[i + 1..] {
                prop_assert!(!a.span.overlaps(&b.span));
            }
        }
    }

    #[test]
    fn confidence_in_unit_interval(series in noisy_series()) {
        let p = Decoder::default().decode(&series).unwrap();
        prop_assert!((0.0..=1.0).contains(&p.confidence));
        if let Some(m) = p.span {
            prop_assert!(m.start < m.end && m.end <= series.len());
        }
    }

    #[test]
    fn epsilon_position_in_search_order_is_irrelevant(series in noisy_series(), slot in 0u32..5) {
        let reordered: Vec<ActionGrammar> = ActionGrammar::standard()
            .into_iter()
            .map(|mut g| {
                if g.path == ExecutionPath::Epsilon {
                    g.priority = slot;
                } else if g.priority >= slot {
                    g.priority += 1;
                }
                g
            })
            .collect();
        let reference = Decoder::default().decode(&series).unwrap();
        let permuted = Decoder::with_grammars(reordered).decode(&series).unwrap();
        prop_assert_eq!(reference, permuted);
    }

    #[test]
    fn one_hot_at_unit_fps_scores_exactly_one(text in symbol_runs()) {
        let p = Decoder::default().decode(&one_hot_series(1.0, &text)).unwrap();
        if p.span.is_some() {
            prop_assert_eq!(p.confidence, 1.0);
        }
    }
}

#[test]
fn all_paths_recovered_without_noise_at_every_rate() {
    for fps in [1.0, 2.0, 3.0, 5.0, 10.0, 30.0] {
        let r = fps as usize;
        for path in ExecutionPath::ALL {
            for seed in 0..20 {
                let clip = generate_clip(path, fps, min_frames(r) + 3 * r, 0.0, seed).unwrap();
                let got = Decoder::default().decode(&clip.series).unwrap();
                assert_eq!(got.path, path, "fps {fps} seed {seed}");
                assert!(got.span.is_some());
            }
        }
    }
}

#[test]
fn batch_decode_preserves_order() {
    let series: Vec<ScoreSeries> = (0..40)
        .map(|i| {
            generate_clip(ExecutionPath::ALL[i % 5], 3.0, 40, 0.05, i as u64)
                .unwrap()
                .series
        })
        .collect();
    let decoder = Decoder::default();
    let par: Vec<_> = decode_batch(&series, &decoder, Execution::Parallel)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    let seq: Vec<_> = decode_batch(&series, &decoder, Execution::Sequential)
        .into_iter()
        .map(Result::unwrap)
        .collect();
    assert_eq!(par, seq);
    for (s, p) in series.iter().zip(&par) {
        assert_eq!(s.video_id(), p.video_id);
    }
}
