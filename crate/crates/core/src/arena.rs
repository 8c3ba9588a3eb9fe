//! Game documents: the name-based [`GameSpec`], its JSON file format, validation,
//! and the index-based [`Game`] every algorithm works on.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::objective::{MullerFamily, Objective, MULLER_MAX_COLORS};
use crate::{Error, Player, Result};

/// A bidding game as written in a document: vertices are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub total_budget: u32,
    pub objective: ObjectiveSpec,
    pub tie: TieSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectiveSpec {
    Reachability { target: Vec<String> },
    Buchi { accepting: Vec<String> },
    Parity { priority: Vec<(String, u32)> },
    Muller { sets: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieSpec {
    Transducer(TransducerSpec),
    Random,
    Advantage { holder: Player },
}

/// Tie-breaking transducer. Transitions are ordered wildcard rules; the first
/// rule whose `from` state and letter pattern match is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerSpec {
    pub states: Vec<String>,
    pub initial: String,
    pub tie_aware: bool,
    pub output: Vec<(String, Player)>,
    pub rules: Vec<RuleSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub from: String,
    pub on: LetterPattern,
    pub to: String,
}

/// `None` fields are wildcards.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LetterPattern {
    pub vertex: Option<String>,
    pub winner: Option<Player>,
    pub tie: Option<bool>,
    pub bid: Option<u32>,
}

impl LetterPattern {
    pub fn any() -> Self {
        Self::default()
    }
}

impl GameSpec {
    pub fn with_total_budget(&self, total_budget: u32) -> GameSpec {
        GameSpec {
            total_budget,
            ..self.clone()
        }
    }

    pub fn with_tie(&self, tie: TieSpec) -> GameSpec {
        GameSpec {
            tie,
            ..self.clone()
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A name that does not resolve to a declared vertex or state.
    Reference,
    /// Any other broken invariant.
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    pub(crate) fn reference(message: impl Into<String>) -> Self {
        Violation {
            kind: ViolationKind::Reference,
            message: message.into(),
        }
    }

    pub(crate) fn semantic(message: impl Into<String>) -> Self {
        Violation {
            kind: ViolationKind::Semantic,
            message: message.into(),
        }
    }

    pub(crate) fn into_error(self) -> Error {
        match self.kind {
            ViolationKind::Reference => Error::Reference(self.message),
            ViolationKind::Semantic => Error::Semantic(self.message),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Lists every broken invariant of `spec`; an empty list means the spec is valid.
pub fn validate_spec(spec: &GameSpec) -> Vec<Violation> {
    let mut out = Vec::new();

    if spec.vertices.is_empty() {
        out.push(Violation::semantic("game has no vertices"));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if v.is_empty() {
            out.push(Violation::semantic("empty vertex name"));
        } else if v == "*" {
            out.push(Violation::semantic("vertex name \"*\" is reserved for wildcards"));
        }
        if index.insert(v.as_str(), i).is_some() {
            out.push(Violation::semantic(format!("duplicate vertex \"{v}\"")));
        }
    }
    let known = |name: &str| index.contains_key(name);

    let mut has_succ = vec![false; spec.vertices.len()];
    let mut has_pred = vec![false; spec.vertices.len()];
    let mut seen_edges = HashSet::new();
    for (u, w) in &spec.edges {
        for end in [u, w] {
            if !known(end) {
                out.push(Violation::reference(format!("unknown vertex \"{end}\" in edge ({u}, {w})")));
            }
        }
        if let (Some(&i), Some(&j)) = (index.get(u.as_str()), index.get(w.as_str())) {
            has_succ[i] = true;
            has_pred[j] = true;
        }
        if !seen_edges.insert((u.as_str(), w.as_str())) {
            out.push(Violation::semantic(format!("duplicate edge ({u}, {w})")));
        }
    }
    for (i, v) in spec.vertices.iter().enumerate() {
        if !has_succ[i] {
            out.push(Violation::semantic(format!("vertex without successor: \"{v}\"")));
        }
    }

    validate_objective(&spec.objective, &spec.vertices, &index, &mut out);

    if let TieSpec::Transducer(t) = &spec.tie {
        validate_transducer(spec, t, &index, &has_pred, &mut out);
    }
    out
}

pub(crate) fn validate_objective(
    objective: &ObjectiveSpec,
    vertices: &[String],
    index: &HashMap<&str, usize>,
    out: &mut Vec<Violation>,
) {
    let known = |name: &str| index.contains_key(name);
    match objective {
        ObjectiveSpec::Reachability { target: set } | ObjectiveSpec::Buchi { accepting: set } => {
            for v in set.iter().filter(|v| !known(v)) {
                out.push(Violation::reference(format!("unknown vertex \"{v}\" in objective")));
            }
        }
        ObjectiveSpec::Parity { priority } => {
            let mut assigned = HashSet::new();
            for (v, p) in priority {
                if !known(v) {
                    out.push(Violation::reference(format!("unknown vertex \"{v}\" in priority")));
                }
                if *p == 0 {
                    out.push(Violation::semantic(format!("priority of \"{v}\" must be at least 1")));
                }
                if !assigned.insert(v.as_str()) {
                    out.push(Violation::semantic(format!("priority of \"{v}\" given twice")));
                }
            }
            for v in vertices.iter().filter(|v| !assigned.contains(v.as_str())) {
                out.push(Violation::semantic(format!("priority missing for vertex \"{v}\"")));
            }
        }
        ObjectiveSpec::Muller { sets } => {
            if vertices.len() > MULLER_MAX_COLORS {
                out.push(Violation::semantic(format!(
                    "Müller objectives support at most {MULLER_MAX_COLORS} vertices"
                )));
            }
            for (k, set) in sets.iter().enumerate() {
                if set.is_empty() {
                    out.push(Violation::semantic(format!("Müller set {k} is empty")));
                }
                for v in set.iter().filter(|v| !known(v)) {
                    out.push(Violation::reference(format!("unknown vertex \"{v}\" in Müller set {k}")));
                }
            }
        }
    }

}

fn validate_transducer(
    spec: &GameSpec,
    t: &TransducerSpec,
    vertex_index: &HashMap<&str, usize>,
    has_pred: &[bool],
    out: &mut Vec<Violation>,
) {
    if t.states.is_empty() {
        out.push(Violation::semantic("transducer has no states"));
        return;
    }
    let mut states: HashMap<&str, usize> = HashMap::new();
    for (i, s) in t.states.iter().enumerate() {
        if states.insert(s.as_str(), i).is_some() {
            out.push(Violation::semantic(format!("duplicate transducer state \"{s}\"")));
        }
    }
    if !states.contains_key(t.initial.as_str()) {
        out.push(Violation::reference(format!("unknown initial state \"{}\"", t.initial)));
    }
    let mut has_output = HashSet::new();
    for (s, _) in &t.output {
        if !states.contains_key(s.as_str()) {
            out.push(Violation::reference(format!("unknown state \"{s}\" in output")));
        }
        if !has_output.insert(s.as_str()) {
            out.push(Violation::semantic(format!("output of state \"{s}\" given twice")));
        }
    }
    for s in t.states.iter().filter(|s| !has_output.contains(s.as_str())) {
        out.push(Violation::semantic(format!("output missing for state \"{s}\"")));
    }

    let mut rules_ok = true;
    for (k, r) in t.rules.iter().enumerate() {
        for s in [&r.from, &r.to] {
            if !states.contains_key(s.as_str()) {
                out.push(Violation::reference(format!("unknown state \"{s}\" in rule {k}")));
                rules_ok = false;
            }
        }
        if let Some(v) = &r.on.vertex {
            if !vertex_index.contains_key(v.as_str()) {
                out.push(Violation::reference(format!("unknown vertex \"{v}\" in rule {k}")));
                rules_ok = false;
            }
        }
        if !t.tie_aware && r.on.tie.is_some() {
            out.push(Violation::semantic(format!(
                "rule {k} inspects ties but the transducer is not tie-aware"
            )));
        }
        if let Some(b) = r.on.bid {
            if b > spec.total_budget {
                out.push(Violation::semantic(format!(
                    "rule {k} matches bid {b} above the total budget {}",
                    spec.total_budget
                )));
            }
        }
    }
    if !rules_ok || states.len() != t.states.len() {
        return;
    }

    // Totality over letters that can occur: the chosen vertex is an edge target,
    // a tie needs both players to afford the bid.
    let rules: Vec<Rule> = t
        .rules
        .iter()
        .map(|r| compile_rule(r, &states, vertex_index))
        .collect();
    let n = spec.total_budget;
    for (q, name) in t.states.iter().enumerate() {
        'letters: for (v, _) in spec.vertices.iter().enumerate().filter(|(v, _)| has_pred[*v]) {
            for winner in Player::BOTH {
                let tie_flags: &[bool] = if t.tie_aware { &[false, true] } else { &[false] };
                for &tie in tie_flags {
                    let max_bid = if tie { n / 2 } else { n };
                    for bid in 0..=max_bid {
                        let letter = Letter { vertex: v, winner, tie, bid };
                        if !rules.iter().any(|r| r.from == q && r.matches(&letter, t.tie_aware)) {
                            out.push(Violation::semantic(format!(
                                "non-total transition: state \"{name}\" has no rule for letter ⟨{}, {}, {}, {}⟩",
                                spec.vertices[v],
                                winner,
                                if !t.tie_aware { "-" } else if tie { "tie" } else { "no-tie" },
                                bid
                            )));
                            break 'letters;
                        }
                    }
                }
            }
        }
    }
}

pub(crate) fn compile_objective(objective: &ObjectiveSpec, index: &HashMap<&str, usize>, n: usize) -> Objective {
    let mask = |set: &[String]| {
        let mut m = vec![false; n];
        for v in set {
            m[index[v.as_str()]] = true;
        }
        m
    };
    match objective {
        ObjectiveSpec::Reachability { target } => Objective::Reachability(mask(target)),
        ObjectiveSpec::Buchi { accepting } => Objective::Buchi(mask(accepting)),
        ObjectiveSpec::Parity { priority } => {
            let mut p = vec![0; n];
            for (v, k) in priority {
                p[index[v.as_str()]] = *k;
            }
            Objective::Parity(p)
        }
        ObjectiveSpec::Muller { sets } => Objective::Muller(MullerFamily::new(
            n,
            sets.iter().map(|s| s.iter().map(|v| index[v.as_str()]).collect::<Vec<_>>()),
        )),
    }
}

fn compile_rule(r: &RuleSpec, states: &HashMap<&str, usize>, vertices: &HashMap<&str, usize>) -> Rule {
    Rule {
        from: states[r.from.as_str()],
        vertex: r.on.vertex.as_ref().map(|v| vertices[v.as_str()]),
        winner: r.on.winner,
        tie: r.on.tie,
        bid: r.on.bid,
        to: states[r.to.as_str()],
    }
}

// ---------------------------------------------------------------------------
// Indexed game
// ---------------------------------------------------------------------------

/// What the transducer reads after each bidding: the vertex the winner moved
/// to, the winner, whether the bids were tied, and the winning bid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub vertex: usize,
    pub winner: Player,
    pub tie: bool,
    pub bid: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub from: usize,
    pub vertex: Option<usize>,
    pub winner: Option<Player>,
    pub tie: Option<bool>,
    pub bid: Option<u32>,
    pub to: usize,
}

impl Rule {
    fn matches(&self, l: &Letter, tie_aware: bool) -> bool {
        self.vertex.is_none_or(|v| v == l.vertex)
            && self.winner.is_none_or(|w| w == l.winner)
            && (!tie_aware || self.tie.is_none_or(|t| t == l.tie))
            && self.bid.is_none_or(|b| b == l.bid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    names: Vec<String>,
    initial: usize,
    output: Vec<Player>,
    tie_aware: bool,
    rules: Vec<Rule>,
}

impl Transducer {
    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The player who wins a tie in state `q`.
    pub fn output(&self, q: usize) -> Player {
        self.output[q]
    }

    pub fn is_tie_aware(&self) -> bool {
        self.tie_aware
    }

    /// Successor state. The tie flag of `letter` is ignored by tie-unaware
    /// transducers.
    pub fn step(&self, q: usize, letter: &Letter) -> Result<usize> {
        self.rules
            .iter()
            .find(|r| r.from == q && r.matches(letter, self.tie_aware))
            .map(|r| r.to)
            .ok_or_else(|| {
                Error::Semantic(format!(
                    "non-total transition: state \"{}\" has no rule for {letter:?}",
                    self.names[q]
                ))
            })
    }

    /// True when every state outputs the same player.
    pub fn constant_output(&self) -> Option<Player> {
        let first = *self.output.first()?;
        self.output.iter().all(|&p| p == first).then_some(first)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieMechanism {
    Transducer(Transducer),
    Random,
    Advantage { holder: Player },
}

impl TieMechanism {
    pub fn name(&self) -> &'static str {
        match self {
            TieMechanism::Transducer(_) => "transducer",
            TieMechanism::Random => "random",
            TieMechanism::Advantage { .. } => "advantage",
        }
    }
}

/// A validated game with vertices, states and objective resolved to indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    spec: GameSpec,
    succ: Vec<Vec<usize>>,
    objective: Objective,
    tie: TieMechanism,
}

impl Game {
    pub fn new(spec: GameSpec) -> Result<Game> {
        if let Some(v) = validate_spec(&spec).into_iter().next() {
            return Err(v.into_error());
        }
        let index: HashMap<&str, usize> = spec
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let n = spec.vertices.len();
        let mut succ = vec![Vec::new(); n];
        for (u, w) in &spec.edges {
            succ[index[u.as_str()]].push(index[w.as_str()]);
        }
        let objective = compile_objective(&spec.objective, &index, n);
        let tie = match &spec.tie {
            TieSpec::Random => TieMechanism::Random,
            TieSpec::Advantage { holder } => TieMechanism::Advantage { holder: *holder },
            TieSpec::Transducer(t) => {
                let states: HashMap<&str, usize> = t
                    .states
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.as_str(), i))
                    .collect();
                let mut output = vec![Player::One; t.states.len()];
                for (s, p) in &t.output {
                    output[states[s.as_str()]] = *p;
                }
                TieMechanism::Transducer(Transducer {
                    names: t.states.clone(),
                    initial: states[t.initial.as_str()],
                    output,
                    tie_aware: t.tie_aware,
                    rules: t.rules.iter().map(|r| compile_rule(r, &states, &index)).collect(),
                })
            }
        };
        Ok(Game {
            spec,
            succ,
            objective,
            tie,
        })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn num_vertices(&self) -> usize {
        self.succ.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.spec.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.spec.vertices.iter().position(|v| v == name)
    }

    /// Successors in edge declaration order.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn total_budget(&self) -> u32 {
        self.spec.total_budget
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn tie(&self) -> &TieMechanism {
        &self.tie
    }

    pub fn transducer(&self) -> Option<&Transducer> {
        match &self.tie {
            TieMechanism::Transducer(t) => Some(t),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

/// Parses and validates a game document.
pub fn parse_game(document: &[u8]) -> Result<GameSpec> {
    let doc: GameDoc = parse_json(document)?;
    let spec = doc.into_spec();
    if let Some(v) = validate_spec(&spec).into_iter().next() {
        return Err(v.into_error());
    }
    Ok(spec)
}

pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(document: &[u8]) -> Result<T> {
    let text = std::str::from_utf8(document).map_err(|e| {
        let (line, column) = line_column(&document[..e.valid_up_to()]);
        Error::Syntax {
            line,
            column,
            message: "document is not valid UTF-8".into(),
        }
    })?;
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn line_column(prefix: &[u8]) -> (usize, usize) {
    let line = 1 + prefix.iter().filter(|&&b| b == b'\n').count();
    let column = 1 + prefix.iter().rev().take_while(|&&b| b != b'\n').count();
    (line, column)
}

/// Canonical document text: fixed key order, declaration order everywhere,
/// two-space indentation, LF line endings and a final newline.
pub fn serialize_game(spec: &GameSpec) -> String {
    let mut s = serde_json::to_string_pretty(&GameDoc::from_spec(spec))
        .expect("game documents always serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct GameDoc {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    total_budget: u32,
    objective: ObjectiveDoc,
    tie: TieDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub(crate) enum ObjectiveDoc {
    Reachability { target: Vec<String> },
    Buchi { accepting: Vec<String> },
    Parity { priority: OrderedMap<u32> },
    Muller { sets: Vec<Vec<String>> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum TieDoc {
    #[serde(rename_all = "camelCase")]
    Transducer {
        states: Vec<String>,
        initial: String,
        tie_aware: bool,
        output: OrderedMap<Player>,
        rules: Vec<RuleDoc>,
    },
    Random {},
    Advantage { holder: Player },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    from: String,
    on: PatternDoc,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    vertex: Field<String>,
    winner: Field<Player>,
    tie: Field<bool>,
    bid: Field<u32>,
}

/// A pattern field: either the wildcard `"*"` or a literal.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Field<T> {
    Any(Wildcard),
    Lit(T),
}

impl<T> Field<T> {
    fn into_option(self) -> Option<T> {
        match self {
            Field::Any(_) => None,
            Field::Lit(t) => Some(t),
        }
    }

    fn from_option(o: Option<T>) -> Self {
        o.map_or(Field::Any(Wildcard), Field::Lit)
    }
}

struct Wildcard;

impl Serialize for Wildcard {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("*")
    }
}

impl<'de> Deserialize<'de> for Wildcard {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "*" {
            Ok(Wildcard)
        } else {
            Err(de::Error::custom("expected \"*\""))
        }
    }
}

/// JSON object whose key order is kept as written.
pub(crate) struct OrderedMap<V>(pub(crate) Vec<(String, V)>);

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for OrderedMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V_<V>(std::marker::PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V_<V> {
            type Value = OrderedMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, V>()? {
                    out.push((k, v));
                }
                Ok(OrderedMap(out))
            }
        }
        d.deserialize_map(V_(std::marker::PhantomData))
    }
}

impl ObjectiveDoc {
    pub(crate) fn into_spec(self) -> ObjectiveSpec {
        match self {
            ObjectiveDoc::Reachability { target } => ObjectiveSpec::Reachability { target },
            ObjectiveDoc::Buchi { accepting } => ObjectiveSpec::Buchi { accepting },
            ObjectiveDoc::Parity { priority } => ObjectiveSpec::Parity { priority: priority.0 },
            ObjectiveDoc::Muller { sets } => ObjectiveSpec::Muller { sets },
        }
    }

    /// Priorities are emitted in vertex declaration order.
    pub(crate) fn from_spec(objective: &ObjectiveSpec, vertices: &[String]) -> ObjectiveDoc {
        match objective {
            ObjectiveSpec::Reachability { target } => ObjectiveDoc::Reachability {
                target: target.clone(),
            },
            ObjectiveSpec::Buchi { accepting } => ObjectiveDoc::Buchi {
                accepting: accepting.clone(),
            },
            ObjectiveSpec::Parity { priority } => {
                let mut ordered: Vec<(String, u32)> = vertices
                    .iter()
                    .filter_map(|k| priority.iter().find(|(e, _)| e == k).cloned())
                    .collect();
                ordered.extend(priority.iter().filter(|(e, _)| !vertices.contains(e)).cloned());
                ObjectiveDoc::Parity {
                    priority: OrderedMap(ordered),
                }
            }
            ObjectiveSpec::Muller { sets } => ObjectiveDoc::Muller { sets: sets.clone() },
        }
    }
}

impl GameDoc {
    fn into_spec(self) -> GameSpec {
        GameSpec {
            vertices: self.vertices,
            edges: self.edges.into_iter().map(|[u, w]| (u, w)).collect(),
            total_budget: self.total_budget,
            objective: self.objective.into_spec(),
            tie: match self.tie {
                TieDoc::Random {} => TieSpec::Random,
                TieDoc::Advantage { holder } => TieSpec::Advantage { holder },
                TieDoc::Transducer {
                    states,
                    initial,
                    tie_aware,
                    output,
                    rules,
                } => TieSpec::Transducer(TransducerSpec {
                    states,
                    initial,
                    tie_aware,
                    output: output.0,
                    rules: rules
                        .into_iter()
                        .map(|r| RuleSpec {
                            from: r.from,
                            on: LetterPattern {
                                vertex: r.on.vertex.into_option(),
                                winner: r.on.winner.into_option(),
                                tie: r.on.tie.into_option(),
                                bid: r.on.bid.into_option(),
                            },
                            to: r.to,
                        })
                        .collect(),
                }),
            },
        }
    }

    fn from_spec(spec: &GameSpec) -> GameDoc {
        GameDoc {
            vertices: spec.vertices.clone(),
            edges: spec.edges.iter().map(|(u, w)| [u.clone(), w.clone()]).collect(),
            total_budget: spec.total_budget,
            objective: ObjectiveDoc::from_spec(&spec.objective, &spec.vertices),
            tie: match &spec.tie {
                TieSpec::Random => TieDoc::Random {},
                TieSpec::Advantage { holder } => TieDoc::Advantage { holder: *holder },
                TieSpec::Transducer(t) => {
                    let mut output: Vec<(String, Player)> = t
                        .states
                        .iter()
                        .filter_map(|s| t.output.iter().find(|(o, _)| o == s).cloned())
                        .collect();
                    output.extend(t.output.iter().filter(|(o, _)| !t.states.contains(o)).cloned());
                    TieDoc::Transducer {
                        states: t.states.clone(),
                        initial: t.initial.clone(),
                        tie_aware: t.tie_aware,
                        output: OrderedMap(output),
                        rules: t
                            .rules
                            .iter()
                            .map(|r| RuleDoc {
                                from: r.from.clone(),
                                on: PatternDoc {
                                    vertex: Field::from_option(r.on.vertex.clone()),
                                    winner: Field::from_option(r.on.winner),
                                    tie: Field::from_option(r.on.tie),
                                    bid: Field::from_option(r.on.bid),
                                },
                                to: r.to.clone(),
                            })
                            .collect(),
                    }
                }
            },
        }
    }
}
