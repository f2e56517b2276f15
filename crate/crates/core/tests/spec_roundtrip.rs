use num_rational::Ratio;
use proptest::prelude::*;
use proptest::sample::subsequence;

use moral_games::interface::number::Exact;
use moral_games::interface::spec_format::{
    parse_game_spec, GameSpecDocument, KantianEntry, KantianSection,
};
use moral_games::valuation::ObservedCounts;

fn exact() -> impl Strategy<Value = Exact> {
    (-200i64..=200, 1i64..=12).prop_map(|(n, d)| Ratio::new(n, d))
}

fn labels(prefix: &'static str) -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set("[a-z][a-z0-9_]{0,5}", 1..4)
        .prop_map(move |s| s.into_iter().map(|l| format!("{prefix}{l}")).collect())
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Exact>>> {
    prop::collection::vec(prop::collection::vec(exact(), cols), rows)
}

fn kantian(labels: Vec<String>) -> impl Strategy<Value = Vec<(String, KantianEntry)>> {
    let n = labels.len();
    (
        subsequence(labels, 0..=n),
        any::<prop::sample::Index>(),
        prop::collection::vec(exact(), n),
    )
        .prop_map(|(chosen, flag_at, values)| {
            let flagged = if chosen.is_empty() {
                usize::MAX
            } else {
                flag_at.index(chosen.len())
            };
            chosen
                .into_iter()
                .zip(values)
                .enumerate()
                .map(|(i, (l, v))| {
                    let e = if i == flagged {
                        KantianEntry::Obligatory
                    } else {
                        KantianEntry::Value(v)
                    };
                    (l, e)
                })
                .collect()
        })
}

fn observed(labels: Vec<String>) -> impl Strategy<Value = Vec<(String, u64)>> {
    let n = labels.len();
    (
        subsequence(labels, 1..=n),
        prop::collection::vec(0u64..500, n),
    )
        .prop_map(|(chosen, counts)| chosen.into_iter().zip(counts).collect())
}

fn document() -> impl Strategy<Value = GameSpecDocument> {
    (
        labels("r"),
        labels("c"),
        "[ -~]{0,12}",
        "[A-Z][a-z0-9]{0,4}",
        "[A-Z][a-z0-9]{0,4}",
    )
        .prop_filter("player names must differ", |(_, _, _, p, q)| p != q)
        .prop_flat_map(|(sa, sb, name, pa, pb)| {
            let (r, c) = (sa.len(), sb.len());
            (
                Just((sa.clone(), sb.clone(), name, pa, pb)),
                matrix(r, c),
                matrix(r, c),
                prop::option::of((kantian(sa.clone()), kantian(sb.clone()))),
                prop::option::of((observed(sa), observed(sb))),
                prop::collection::vec(("[a-z]{1,6}", "[a-z0-9]{1,8}"), 0..3),
            )
        })
        .prop_map(
            |((sa, sb, name, pa, pb), ma, mb, k, o, meta)| GameSpecDocument {
                name,
                players: [pa, pb],
                strategies_a: sa,
                strategies_b: sb,
                payoff_a: ma,
                payoff_b: mb,
                kantian: k.map(|(a, b)| KantianSection { a, b }),
                observed: o.map(|(a, b)| ObservedCounts { a, b }),
                metadata: meta,
            },
        )
}

/// Empty kantian lines are not written, so compare with those normalized.
fn normalized(mut d: GameSpecDocument) -> GameSpecDocument {
    if d.kantian
        .as_ref()
        .is_some_and(|k| k.a.is_empty() && k.b.is_empty())
    {
        d.kantian = None;
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn serialize_then_parse_is_identity(doc in document()) {
        let text = doc.serialize();
        let back = parse_game_spec(&text).unwrap();
        prop_assert_eq!(normalized(back.clone()), normalized(doc));
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn crlf_and_comments_do_not_change_the_document(doc in document()) {
        let text = doc.serialize();
        let noisy: String = text
            .lines()
            .map(|l| format!("{l}   # note\r\n# whole-line comment\r\n"))
            .collect();
        prop_assert_eq!(parse_game_spec(&noisy).unwrap(), parse_game_spec(&text).unwrap());
    }

    #[test]
    fn parser_never_panics(text in "[ -~\n]{0,200}") {
        let _ = parse_game_spec(&text);
    }
}

#[test]
fn bundled_specs_are_canonical_after_one_pass() {
    for text in [
        include_str!("../data/trust.game"),
        include_str!("../data/wait_or_pass.game"),
    ] {
        let once = parse_game_spec(text).unwrap().serialize();
        let twice = parse_game_spec(&once).unwrap().serialize();
        assert_eq!(once, twice);
    }
}
