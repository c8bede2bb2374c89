//! Substitution-rule engine: generates quasiperiodic plate words and their
//! adjacent-pair statistics.
//!
//! Words grow geometrically with the iteration count, so next to the plain
//! rewriting path there is a counts-only recursion that tracks, per symbol,
//! the pair counts of its expansion together with the expansion's first and
//! last symbols. Junction pairs between neighbouring expansions are composed
//! from those, which gives exact statistics in O(iterations) without ever
//! materializing the word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Longest word `iterate` will materialize.
pub const MAX_MATERIALIZED_LEN: u128 = 50_000_000;

/// Plate-word letter. `D` stands for a dielectric/conducting plate,
/// `N` for a permeable one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    D,
    N,
}

impl Symbol {
    pub fn as_char(&self) -> char {
        match self {
            Symbol::D => 'D',
            Symbol::N => 'N',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'D' | 'd' => Some(Symbol::D),
            'N' | 'n' => Some(Symbol::N),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no substitution rule for symbol {0}")]
    MissingRule(Symbol),
    #[error("word of {len} symbols exceeds the materialization limit {max}")]
    WordTooLong { len: u128, max: u128 },
    #[error("pair counts overflow 128-bit integers at iteration {iteration}")]
    CountsOverflow { iteration: u32 },
    #[error("word must be nonempty")]
    EmptyWord,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> LatticeError {
    LatticeError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// A word over the plate alphabet, tagged with the iteration it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    symbols: Vec<Symbol>,
    iteration: u32,
}

impl Word {
    pub fn new(symbols: Vec<Symbol>, iteration: u32) -> Result<Word, LatticeError> {
        if symbols.is_empty() {
            return Err(LatticeError::EmptyWord);
        }
        Ok(Word { symbols, iteration })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Counts of adjacent plate pairs in a word. Like pairs (DD, NN) bind,
/// unlike pairs (DN, ND) repel, and `n_like + n_unlike = n_plates - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborhoodStats {
    pub n_like: u128,
    pub n_unlike: u128,
    pub n_plates: u128,
}

/// A parallel-rewriting substitution system over {D, N}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionSystem {
    alphabet: BTreeSet<Symbol>,
    rules: BTreeMap<Symbol, Vec<Symbol>>,
    axiom: Symbol,
}

impl SubstitutionSystem {
    /// Build a validated system. Every symbol reachable from the axiom or
    /// from any rule's right-hand side must itself carry a rule.
    pub fn new(
        axiom: Symbol,
        rules: BTreeMap<Symbol, Vec<Symbol>>,
    ) -> Result<SubstitutionSystem, LatticeError> {
        let mut alphabet: BTreeSet<Symbol> = BTreeSet::new();
        alphabet.insert(axiom);
        for (lhs, rhs) in &rules {
            alphabet.insert(*lhs);
            alphabet.extend(rhs.iter().copied());
        }
        for sym in &alphabet {
            match rules.get(sym) {
                None => return Err(LatticeError::MissingRule(*sym)),
                Some(rhs) if rhs.is_empty() => return Err(LatticeError::MissingRule(*sym)),
                Some(_) => {}
            }
        }
        Ok(SubstitutionSystem {
            alphabet,
            rules,
            axiom,
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn axiom(&self) -> Symbol {
        self.axiom
    }

    pub fn rule(&self, sym: Symbol) -> &[Symbol] {
        &self.rules[&sym]
    }

    /// Rule text in the same DSL `parse_rules` accepts.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("axiom {};\n", self.axiom);
        for (lhs, rhs) in &self.rules {
            let body: Vec<String> = rhs.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("{} -> {};\n", lhs, body.join(" ")));
        }
        out
    }
}

/// Apply the rules `iteration` times to the axiom, rewriting every symbol in
/// parallel at each step. Iteration 0 is the axiom itself.
pub fn iterate(system: &SubstitutionSystem, iteration: u32) -> Result<Word, LatticeError> {
    let expected = length_at(system, iteration)?;
    if expected > MAX_MATERIALIZED_LEN {
        return Err(LatticeError::WordTooLong {
            len: expected,
            max: MAX_MATERIALIZED_LEN,
        });
    }
    let mut symbols = vec![system.axiom];
    for _ in 0..iteration {
        let mut next = Vec::with_capacity(symbols.len() * 2);
        for s in &symbols {
            next.extend_from_slice(system.rule(*s));
        }
        symbols = next;
    }
    Word::new(symbols, iteration)
}

/// Exact adjacent-pair counts of a word.
pub fn stats(word: &Word) -> NeighborhoodStats {
    let mut n_like = 0u128;
    let mut n_unlike = 0u128;
    for pair in word.symbols.windows(2) {
        if pair[0] == pair[1] {
            n_like += 1;
        } else {
            n_unlike += 1;
        }
    }
    NeighborhoodStats {
        n_like,
        n_unlike,
        n_plates: word.len() as u128,
    }
}

/// Per-symbol expansion summary used by the counts-only recursion.
#[derive(Clone, Copy, Debug)]
struct ExpansionStats {
    len: u128,
    n_like: u128,
    n_unlike: u128,
    first: Symbol,
    last: Symbol,
}

impl ExpansionStats {
    fn leaf(sym: Symbol) -> ExpansionStats {
        ExpansionStats {
            len: 1,
            n_like: 0,
            n_unlike: 0,
            first: sym,
            last: sym,
        }
    }
}

fn concat(parts: &[ExpansionStats], iteration: u32) -> Result<ExpansionStats, LatticeError> {
    let overflow = || LatticeError::CountsOverflow { iteration };
    let mut acc = parts[0];
    for p in &parts[1..] {
        acc.len = acc.len.checked_add(p.len).ok_or_else(overflow)?;
        acc.n_like = acc.n_like.checked_add(p.n_like).ok_or_else(overflow)?;
        acc.n_unlike = acc.n_unlike.checked_add(p.n_unlike).ok_or_else(overflow)?;
        if acc.last == p.first {
            acc.n_like = acc.n_like.checked_add(1).ok_or_else(overflow)?;
        } else {
            acc.n_unlike = acc.n_unlike.checked_add(1).ok_or_else(overflow)?;
        }
        acc.last = p.last;
    }
    Ok(acc)
}

fn expansion_stats(
    system: &SubstitutionSystem,
    iteration: u32,
) -> Result<BTreeMap<Symbol, ExpansionStats>, LatticeError> {
    let mut level: BTreeMap<Symbol, ExpansionStats> = system
        .alphabet
        .iter()
        .map(|s| (*s, ExpansionStats::leaf(*s)))
        .collect();
    for step in 0..iteration {
        let mut next = BTreeMap::new();
        for sym in &system.alphabet {
            let parts: Vec<ExpansionStats> = system.rule(*sym).iter().map(|s| level[s]).collect();
            next.insert(*sym, concat(&parts, step + 1)?);
        }
        level = next;
    }
    Ok(level)
}

/// Pair counts of `iterate(system, iteration)` without materializing the
/// word. Agrees exactly with `stats` and runs in O(iteration).
pub fn stats_at(
    system: &SubstitutionSystem,
    iteration: u32,
) -> Result<NeighborhoodStats, LatticeError> {
    let level = expansion_stats(system, iteration)?;
    let e = level[&system.axiom];
    Ok(NeighborhoodStats {
        n_like: e.n_like,
        n_unlike: e.n_unlike,
        n_plates: e.len,
    })
}

/// Word length after `iteration` rewrites, without materializing.
pub fn length_at(system: &SubstitutionSystem, iteration: u32) -> Result<u128, LatticeError> {
    Ok(expansion_stats(system, iteration)?[&system.axiom].len)
}

/// Parse the rule DSL:
///
/// ```text
/// axiom D; D -> D N; N -> D;
/// ```
///
/// Statements are separated by `;`. Symbols are the single letters D and N;
/// whitespace is insignificant, so `D->DN` reads the same as `D -> D N`.
pub fn parse_rules(text: &str) -> Result<SubstitutionSystem, LatticeError> {
    #[derive(Clone, Copy, PartialEq, Debug)]
    enum Tok {
        Axiom,
        Arrow,
        Semi,
        Sym(Symbol),
    }

    // Lex with line/column positions (1-based).
    let mut toks: Vec<(Tok, usize, usize)> = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let mut chars = line.char_indices().peekable();
        while let Some(&(ci, c)) = chars.peek() {
            let col = ci + 1;
            if c.is_whitespace() {
                chars.next();
            } else if c == ';' {
                toks.push((Tok::Semi, li + 1, col));
                chars.next();
            } else if c == '-' {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        toks.push((Tok::Arrow, li + 1, col));
                    }
                    _ => return Err(parse_err(li + 1, col, "expected '->'")),
                }
            } else if c.is_alphabetic() {
                // Greedily read a keyword; otherwise treat each letter as a symbol.
                let rest: String = line[ci..]
                    .chars()
                    .take_while(|c| c.is_alphabetic())
                    .collect();
                if rest.eq_ignore_ascii_case("axiom") {
                    for _ in 0..rest.len() {
                        chars.next();
                    }
                    toks.push((Tok::Axiom, li + 1, col));
                } else {
                    match Symbol::from_char(c) {
                        Some(s) => {
                            toks.push((Tok::Sym(s), li + 1, col));
                            chars.next();
                        }
                        None => {
                            return Err(parse_err(li + 1, col, format!("unknown symbol '{c}'")))
                        }
                    }
                }
            } else {
                return Err(parse_err(
                    li + 1,
                    col,
                    format!("unexpected character '{c}'"),
                ));
            }
        }
    }

    // Split into `;`-terminated statements.
    let mut axiom: Option<Symbol> = None;
    let mut rules: BTreeMap<Symbol, Vec<Symbol>> = BTreeMap::new();
    let mut idx = 0;
    while idx < toks.len() {
        let start = idx;
        let mut end = idx;
        while end < toks.len() && toks[end].0 != Tok::Semi {
            end += 1;
        }
        let stmt = &toks[start..end];
        idx = if end < toks.len() { end + 1 } else { end };
        if stmt.is_empty() {
            continue;
        }
        let (first, line, col) = (stmt[0].0, stmt[0].1, stmt[0].2);
        match first {
            Tok::Axiom => {
                if stmt.len() != 2 {
                    return Err(parse_err(line, col, "expected 'axiom <symbol>'"));
                }
                let Tok::Sym(s) = stmt[1].0 else {
                    return Err(parse_err(
                        stmt[1].1,
                        stmt[1].2,
                        "expected a symbol after 'axiom'",
                    ));
                };
                if axiom.replace(s).is_some() {
                    return Err(parse_err(line, col, "duplicate axiom"));
                }
            }
            Tok::Sym(lhs) => {
                if stmt.len() < 2 || stmt[1].0 != Tok::Arrow {
                    return Err(parse_err(line, col, "expected '<symbol> -> <symbols>'"));
                }
                let mut rhs = Vec::new();
                for &(t, l, c) in &stmt[2..] {
                    match t {
                        Tok::Sym(s) => rhs.push(s),
                        _ => {
                            return Err(parse_err(l, c, "expected a symbol on the right-hand side"))
                        }
                    }
                }
                if rhs.is_empty() {
                    return Err(parse_err(
                        line,
                        col,
                        format!("empty right-hand side for '{lhs}'"),
                    ));
                }
                if rules.insert(lhs, rhs).is_some() {
                    return Err(parse_err(line, col, format!("duplicate rule for '{lhs}'")));
                }
            }
            _ => {
                return Err(parse_err(
                    line,
                    col,
                    "statement must start with 'axiom' or a symbol",
                ))
            }
        }
    }

    let axiom = axiom.ok_or_else(|| parse_err(1, 1, "missing 'axiom' statement"))?;
    SubstitutionSystem::new(axiom, rules).map_err(|e| match e {
        LatticeError::MissingRule(s) => parse_err(1, 1, format!("missing rule for symbol '{s}'")),
        other => other,
    })
}

/// The eight named substitution systems, all with axiom D.
pub mod presets {
    use super::{parse_rules, SubstitutionSystem};

    pub const NAMES: [&str; 8] = [
        "fibonacci",
        "thue-morse",
        "period-doubling",
        "silver-mean",
        "bronze-mean",
        "copper-mean",
        "nickel-mean",
        "triadic-cantor",
    ];

    fn build(dsl: &str) -> SubstitutionSystem {
        parse_rules(dsl).expect("preset rule text is valid")
    }

    pub fn fibonacci() -> SubstitutionSystem {
        build("axiom D; D -> D N; N -> D;")
    }

    pub fn thue_morse() -> SubstitutionSystem {
        build("axiom D; D -> D N; N -> N D;")
    }

    pub fn period_doubling() -> SubstitutionSystem {
        build("axiom D; D -> D N; N -> D D;")
    }

    pub fn silver_mean() -> SubstitutionSystem {
        build("axiom D; D -> D N D; N -> D;")
    }

    pub fn bronze_mean() -> SubstitutionSystem {
        build("axiom D; D -> D D D N; N -> D;")
    }

    pub fn copper_mean() -> SubstitutionSystem {
        build("axiom D; D -> D N N; N -> D;")
    }

    pub fn nickel_mean() -> SubstitutionSystem {
        build("axiom D; D -> D N N N; N -> D;")
    }

    pub fn triadic_cantor() -> SubstitutionSystem {
        build("axiom D; D -> D N D; N -> N N N;")
    }

    /// Look a preset up by name, case-insensitively; spaces and underscores
    /// are treated as hyphens.
    pub fn by_name(name: &str) -> Option<SubstitutionSystem> {
        let key: String = name.trim().to_ascii_lowercase().replace([' ', '_'], "-");
        match key.as_str() {
            "fibonacci" => Some(fibonacci()),
            "thue-morse" => Some(thue_morse()),
            "period-doubling" => Some(period_doubling()),
            "silver-mean" => Some(silver_mean()),
            "bronze-mean" => Some(bronze_mean()),
            "copper-mean" => Some(copper_mean()),
            "nickel-mean" => Some(nickel_mean()),
            "triadic-cantor" => Some(triadic_cantor()),
            _ => None,
        }
    }
}
