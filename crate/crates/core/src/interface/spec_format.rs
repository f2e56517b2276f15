//! Line-oriented game-spec files.
//!
//! ```text
//! game "trust"
//! players P1 P2
//! strategies P1: a b
//! strategies P2: ap bp
//! payoffs P1:
//!   10 10
//!   15 0
//! payoffs P2:
//!   10 10
//!   25 40
//! kantian P1: b=0
//! kantian P2: ap=0
//! observed P1: a=52 b=46
//! observed P2: ap=31 bp=15
//! meta source=lab summary
//! ```
//!
//! Sections may come in any order. `#` starts a comment. Payoff rows are
//! indexed by the first player's strategies for both matrices. Numbers are
//! integers, decimals or fractions `a/b` and are kept exact until a
//! [`BimatrixGame`] is built. Kantian entries also accept `obligatory` and
//! `forbidden`.

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, KantianAnnotation, KantianValue, Player};
use crate::interface::number::{format_exact, parse_exact, to_f64, Exact};
use crate::valuation::ObservedCounts;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KantianEntry {
    Value(Exact),
    Obligatory,
    Forbidden,
}

impl KantianEntry {
    fn to_value(self) -> KantianValue {
        match self {
            KantianEntry::Value(v) => KantianValue::Finite(to_f64(&v)),
            KantianEntry::Obligatory => KantianValue::Obligatory,
            KantianEntry::Forbidden => KantianValue::Forbidden,
        }
    }

    fn text(&self) -> String {
        match self {
            KantianEntry::Value(v) => format_exact(v),
            KantianEntry::Obligatory => "obligatory".to_string(),
            KantianEntry::Forbidden => "forbidden".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KantianSection {
    pub a: Vec<(String, KantianEntry)>,
    pub b: Vec<(String, KantianEntry)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpecDocument {
    pub name: String,
    pub players: [String; 2],
    pub strategies_a: Vec<String>,
    pub strategies_b: Vec<String>,
    pub payoff_a: Vec<Vec<Exact>>,
    pub payoff_b: Vec<Vec<Exact>>,
    pub kantian: Option<KantianSection>,
    pub observed: Option<ObservedCounts>,
    pub metadata: Vec<(String, String)>,
}

impl GameSpecDocument {
    /// The game with payoffs converted to doubles.
    pub fn game(&self) -> Result<BimatrixGame> {
        let conv = |m: &[Vec<Exact>]| -> Vec<Vec<f64>> {
            m.iter()
                .map(|row| row.iter().map(to_f64).collect())
                .collect()
        };
        BimatrixGame::new(
            self.name.clone(),
            self.strategies_a.clone(),
            self.strategies_b.clone(),
            conv(&self.payoff_a),
            conv(&self.payoff_b),
        )
    }

    pub fn annotation(&self) -> Option<KantianAnnotation> {
        let k = self.kantian.as_ref()?;
        let mut ann = KantianAnnotation::new();
        for (label, e) in &k.a {
            ann = ann.with(Player::A, label.clone(), e.to_value());
        }
        for (label, e) in &k.b {
            ann = ann.with(Player::B, label.clone(), e.to_value());
        }
        Some(ann)
    }

    pub fn player(&self, name: &str) -> Option<Player> {
        if name == self.players[0] {
            Some(Player::A)
        } else if name == self.players[1] {
            Some(Player::B)
        } else {
            None
        }
    }

    /// Canonical text; parsing it gives back an equal document.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let esc = self.name.replace('\\', "\\\\").replace('"', "\\\"");
        out.push_str(&format!("game \"{esc}\"\n"));
        out.push_str(&format!(
            "players {} {}\n",
            self.players[0], self.players[1]
        ));
        for (p, s) in self
            .players
            .iter()
            .zip([&self.strategies_a, &self.strategies_b])
        {
            out.push_str(&format!("strategies {p}: {}\n", s.join(" ")));
        }
        for (p, m) in self.players.iter().zip([&self.payoff_a, &self.payoff_b]) {
            out.push_str(&format!("payoffs {p}:\n"));
            for row in m {
                let cells: Vec<String> = row.iter().map(format_exact).collect();
                out.push_str(&format!("  {}\n", cells.join(" ")));
            }
        }
        if let Some(k) = &self.kantian {
            for (p, entries) in self.players.iter().zip([&k.a, &k.b]) {
                if entries.is_empty() {
                    continue;
                }
                let items: Vec<String> = entries
                    .iter()
                    .map(|(l, e)| format!("{l}={}", e.text()))
                    .collect();
                out.push_str(&format!("kantian {p}: {}\n", items.join(" ")));
            }
        }
        if let Some(o) = &self.observed {
            for (p, entries) in self.players.iter().zip([&o.a, &o.b]) {
                if entries.is_empty() {
                    continue;
                }
                let items: Vec<String> = entries.iter().map(|(l, n)| format!("{l}={n}")).collect();
                out.push_str(&format!("observed {p}: {}\n", items.join(" ")));
            }
        }
        for (k, v) in &self.metadata {
            out.push_str(&format!("meta {k}={v}\n"));
        }
        out
    }
}

/// Everything after a `#` that is not inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    let mut escaped = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '\\' if in_quotes && !escaped => {
                escaped = true;
                continue;
            }
            '"' if !escaped => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
        escaped = false;
    }
    line
}

const KEYWORDS: [&str; 7] = [
    "game",
    "players",
    "strategies",
    "payoffs",
    "kantian",
    "observed",
    "meta",
];

struct Header<'a> {
    line: usize,
    keyword: &'a str,
    /// Text between the keyword and `:` (player name) or the whole rest.
    target: &'a str,
    /// Text after `:` when present.
    body: Option<&'a str>,
}

struct Raw<'a> {
    header: Header<'a>,
    rows: Vec<(usize, &'a str)>,
}

fn split_header(line: usize, text: &str) -> Result<Header<'_>> {
    let (keyword, rest) = match text.find(char::is_whitespace) {
        Some(k) => (&text[..k], text[k..].trim()),
        None => (text, ""),
    };
    let keyword = keyword.trim_end_matches(':');
    if !KEYWORDS.contains(&keyword) {
        return Err(Error::parse(line, format!("unknown section `{keyword}`")));
    }
    let (target, body) = match keyword {
        "game" | "players" | "meta" => (rest, None),
        _ => match rest.split_once(':') {
            Some((t, b)) => (t.trim(), Some(b.trim())),
            None => return Err(Error::parse(line, format!("`{keyword}` needs `<player>:`"))),
        },
    };
    Ok(Header {
        line,
        keyword,
        target,
        body,
    })
}

fn parse_name(line: usize, text: &str) -> Result<String> {
    let inner = text
        .strip_prefix('"')
        .and_then(|t| t.strip_suffix('"'))
        .ok_or_else(|| Error::parse(line, "game name must be double-quoted"))?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some(n) => out.push(n),
                None => return Err(Error::parse(line, "dangling escape in game name")),
            },
            '"' => return Err(Error::parse(line, "unescaped quote in game name")),
            c => out.push(c),
        }
    }
    Ok(out)
}

fn parse_number(line: usize, tok: &str) -> Result<Exact> {
    parse_exact(tok).map_err(|m| Error::parse(line, m))
}

fn pairs(line: usize, body: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for tok in body.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected label=value, got `{tok}`")))?;
        if k.is_empty() {
            return Err(Error::parse(line, format!("empty label in `{tok}`")));
        }
        if out.iter().any(|(l, _)| l == k) {
            return Err(Error::parse(line, format!("`{k}` listed twice")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Parses a game-spec document. Errors carry 1-based line numbers.
pub fn parse_game_spec(text: &str) -> Result<GameSpecDocument> {
    let mut sections: Vec<Raw> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw_line.trim_end_matches('\r')).trim();
        if content.is_empty() {
            continue;
        }
        let first = content.split_whitespace().next().unwrap_or("");
        if KEYWORDS.contains(&first.trim_end_matches(':')) {
            sections.push(Raw {
                header: split_header(line, content)?,
                rows: Vec::new(),
            });
        } else {
            match sections.last_mut() {
                Some(s) if s.header.keyword == "payoffs" => s.rows.push((line, content)),
                _ => {
                    let word = first.trim_end_matches(':');
                    return Err(if parse_exact(word).is_ok() {
                        Error::parse(line, "payoff row outside a payoffs section")
                    } else {
                        Error::parse(line, format!("unknown section `{word}`"))
                    });
                }
            }
        }
    }

    let game_sec = sections
        .iter()
        .filter(|s| s.header.keyword == "game")
        .collect::<Vec<_>>();
    let name = match game_sec.as_slice() {
        [] => return Err(Error::parse(0, "no game section")),
        [g] => parse_name(g.header.line, g.header.target)?,
        [_, g, ..] => return Err(Error::parse(g.header.line, "duplicate section `game`")),
    };

    let mut players = ["P1".to_string(), "P2".to_string()];
    let player_lines: Vec<&Raw> = sections
        .iter()
        .filter(|s| s.header.keyword == "players")
        .collect();
    if let Some(dup) = player_lines.get(1) {
        return Err(Error::parse(dup.header.line, "duplicate section `players`"));
    }
    if let Some(p) = player_lines.first() {
        let names: Vec<&str> = p.header.target.split_whitespace().collect();
        if names.len() != 2 || names[0] == names[1] {
            return Err(Error::parse(
                p.header.line,
                "`players` needs two distinct names",
            ));
        }
        players = [names[0].to_string(), names[1].to_string()];
    }
    let who = |h: &Header| -> Result<usize> {
        players
            .iter()
            .position(|p| p == h.target)
            .ok_or_else(|| Error::parse(h.line, format!("unknown player `{}`", h.target)))
    };

    let mut strategies: [Option<Vec<String>>; 2] = [None, None];
    let mut payoff_secs: [Option<&Raw>; 2] = [None, None];
    let mut kantian: [Option<Vec<(String, KantianEntry)>>; 2] = [None, None];
    let mut observed: [Option<Vec<(String, u64)>>; 2] = [None, None];
    let mut metadata = Vec::new();

    for sec in &sections {
        let h = &sec.header;
        let dup = || {
            Error::parse(
                h.line,
                format!("duplicate section `{} {}`", h.keyword, h.target),
            )
        };
        match h.keyword {
            "game" | "players" => {}
            "meta" => {
                let (k, v) = h
                    .target
                    .split_once('=')
                    .ok_or_else(|| Error::parse(h.line, "meta needs key=value"))?;
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            "strategies" => {
                let p = who(h)?;
                if strategies[p].is_some() {
                    return Err(dup());
                }
                let labels: Vec<String> = h
                    .body
                    .unwrap_or("")
                    .split_whitespace()
                    .map(String::from)
                    .collect();
                if labels.is_empty() {
                    return Err(Error::parse(h.line, "no strategies listed"));
                }
                if let Some(bad) = labels.iter().find(|l| l.contains(['=', ':', '"'])) {
                    return Err(Error::parse(
                        h.line,
                        format!("invalid strategy label `{bad}`"),
                    ));
                }
                strategies[p] = Some(labels);
            }
            "payoffs" => {
                let p = who(h)?;
                if payoff_secs[p].is_some() {
                    return Err(dup());
                }
                if h.body.is_some_and(|b| !b.is_empty()) {
                    return Err(Error::parse(
                        h.line,
                        "payoff rows go on the following lines",
                    ));
                }
                payoff_secs[p] = Some(sec);
            }
            "kantian" => {
                let p = who(h)?;
                if kantian[p].is_some() {
                    return Err(dup());
                }
                let mut entries = Vec::new();
                for (label, v) in pairs(h.line, h.body.unwrap_or(""))? {
                    let e = match v.to_ascii_lowercase().as_str() {
                        "obligatory" => KantianEntry::Obligatory,
                        "forbidden" => KantianEntry::Forbidden,
                        _ => KantianEntry::Value(parse_number(h.line, &v)?),
                    };
                    entries.push((label, e));
                }
                kantian[p] = Some(entries);
            }
            "observed" => {
                let p = who(h)?;
                if observed[p].is_some() {
                    return Err(dup());
                }
                let mut entries = Vec::new();
                for (label, v) in pairs(h.line, h.body.unwrap_or(""))? {
                    let n: u64 = v.parse().map_err(|_| {
                        Error::parse(h.line, format!("count `{v}` is not a nonnegative integer"))
                    })?;
                    entries.push((label, n));
                }
                observed[p] = Some(entries);
            }
            _ => unreachable!("keywords checked in split_header"),
        }
    }

    let [sa, sb] = strategies;
    let sa = sa.ok_or_else(|| Error::parse(0, format!("missing `strategies {}`", players[0])))?;
    let sb = sb.ok_or_else(|| Error::parse(0, format!("missing `strategies {}`", players[1])))?;
    let read_matrix = |p: usize| -> Result<Vec<Vec<Exact>>> {
        let sec = payoff_secs[p]
            .ok_or_else(|| Error::parse(0, format!("missing `payoffs {}`", players[p])))?;
        if sec.rows.len() != sa.len() {
            return Err(Error::parse(
                sec.header.line,
                format!(
                    "shape mismatch: payoffs {} has {} rows, expected {} (one per strategy of {})",
                    players[p],
                    sec.rows.len(),
                    sa.len(),
                    players[0]
                ),
            ));
        }
        sec.rows
            .iter()
            .map(|(line, text)| {
                let row: Vec<Exact> = text
                    .split_whitespace()
                    .map(|t| parse_number(*line, t))
                    .collect::<Result<_>>()?;
                if row.len() != sb.len() {
                    return Err(Error::parse(
                        *line,
                        format!(
                            "shape mismatch: row has {} entries, expected {} (one per strategy of {})",
                            row.len(),
                            sb.len(),
                            players[1]
                        ),
                    ));
                }
                Ok(row)
            })
            .collect()
    };
    let payoff_a = read_matrix(0)?;
    let payoff_b = read_matrix(1)?;

    let [ka, kb] = kantian;
    let kantian = (ka.is_some() || kb.is_some()).then(|| KantianSection {
        a: ka.unwrap_or_default(),
        b: kb.unwrap_or_default(),
    });
    let [oa, ob] = observed;
    let observed = (oa.is_some() || ob.is_some()).then(|| ObservedCounts {
        a: oa.unwrap_or_default(),
        b: ob.unwrap_or_default(),
    });

    let doc = GameSpecDocument {
        name,
        players,
        strategies_a: sa,
        strategies_b: sb,
        payoff_a,
        payoff_b,
        kantian,
        observed,
        metadata,
    };
    // label checks against the built game
    let game = doc.game().map_err(|e| Error::parse(0, e.to_string()))?;
    if let Some(ann) = doc.annotation() {
        ann.validate(&game)
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    if let Some(obs) = &doc.observed {
        obs.aligned(&game)
            .map_err(|e| Error::parse(0, e.to_string()))?;
    }
    Ok(doc)
}
