//! JSON instance documents: `{"kind", "metadata", "body"}` in that key order.
//! Rationals are bare integers or `"num/den"` strings; an unbounded budget is
//! the string `"inf"`.

use std::fmt;

use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::anm::{AnmInstance, Budget, Edge, EditSet};
use crate::game::{
    validate_game, AltruismNetwork, BnpgGame, ExternalityTable, InputGraph, StrategyProfile,
};
use crate::knapsack::{KnapsackInstance, KnapsackItem};
use crate::mixed::MixedProfile;
use crate::rational::Rational;
use crate::reductions::{DirectedPgg, SatInstance};
use crate::BnpgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Game,
    Anm,
    Knapsack,
    Sat,
    Dpgg,
    Profile,
    Mixed,
    Edits,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string tag"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Game(BnpgGame),
    Anm(AnmInstance),
    Knapsack(KnapsackInstance),
    Sat(SatInstance),
    Dpgg(DirectedPgg),
    Profile(StrategyProfile),
    Mixed(MixedProfile),
    Edits(EditSet),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Game(_) => Kind::Game,
            Instance::Anm(_) => Kind::Anm,
            Instance::Knapsack(_) => Kind::Knapsack,
            Instance::Sat(_) => Kind::Sat,
            Instance::Dpgg(_) => Kind::Dpgg,
            Instance::Profile(_) => Kind::Profile,
            Instance::Mixed(_) => Kind::Mixed,
            Instance::Edits(_) => Kind::Edits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceDocument {
    pub metadata: Metadata,
    pub instance: Instance,
}

impl InstanceDocument {
    pub fn new(instance: Instance) -> Self {
        InstanceDocument {
            metadata: Metadata::default(),
            instance,
        }
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.metadata.description = Some(description.into());
        self
    }

    pub fn kind(&self) -> Kind {
        self.instance.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        // serde_json appends the position to its message; keep only the cause.
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        match e.classify() {
            serde_json::error::Category::Data => DocumentError::Schema {
                line,
                column,
                message,
            },
            _ => DocumentError::Syntax {
                line,
                column,
                message,
            },
        }
    }
}

impl From<BnpgError> for DocumentError {
    fn from(e: BnpgError) -> Self {
        DocumentError::Invariant(e.to_string())
    }
}

fn serialize_budget<S: Serializer>(b: &Budget, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Budget::Finite(v) => s.serialize_u64(*v),
        Budget::Infinite => s.serialize_str("inf"),
    }
}

fn deserialize_budget<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Budget, D::Error> {
    struct BudgetVisitor;
    impl Visitor<'_> for BudgetVisitor {
        type Value = Budget;
        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a non-negative integer or \"inf\"")
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Budget, E> {
            Ok(Budget::Finite(v))
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Budget, E> {
            u64::try_from(v)
                .map(Budget::Finite)
                .map_err(|_| E::custom("budget must be non-negative"))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Budget, E> {
            if v == "inf" {
                Ok(Budget::Infinite)
            } else {
                Err(E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
    }
    d.deserialize_any(BudgetVisitor)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AltruismBody {
    directed: bool,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameBody {
    players: usize,
    edges: Vec<Edge>,
    altruism: AltruismBody,
    a: Rational,
    costs: Vec<Rational>,
    tables: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostEntry {
    edge: Edge,
    cost: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnmBody {
    game: GameBody,
    target: Vec<u8>,
    add_costs: Vec<CostEntry>,
    delete_costs: Vec<CostEntry>,
    #[serde(
        serialize_with = "serialize_budget",
        deserialize_with = "deserialize_budget"
    )]
    budget: Budget,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnapsackBody {
    items: Vec<KnapsackItem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SatBody {
    variables: usize,
    clauses: Vec<[i32; 3]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DpggBody {
    nodes: usize,
    arcs: Vec<Edge>,
    price: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileBody {
    actions: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixedBody {
    probabilities: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EditsBody {
    additions: Vec<Edge>,
    deletions: Vec<Edge>,
    total_cost: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<B> {
    kind: Kind,
    #[serde(default)]
    metadata: Metadata,
    body: B,
}

#[derive(Deserialize)]
struct Head {
    kind: Kind,
}

fn game_body(game: &BnpgGame) -> GameBody {
    let h = game.altruism();
    GameBody {
        players: game.player_count(),
        edges: game.graph().edges().to_vec(),
        altruism: AltruismBody {
            directed: h.is_directed(),
            edges: h.edges().to_vec(),
        },
        a: game.altruism_weight().clone(),
        costs: game.costs().to_vec(),
        tables: game.tables().iter().map(|t| t.values().to_vec()).collect(),
    }
}

fn costs(map: &std::collections::BTreeMap<Edge, u64>) -> Vec<CostEntry> {
    map.iter()
        .map(|(&edge, &cost)| CostEntry { edge, cost })
        .collect()
}

fn build_game(body: GameBody) -> Result<BnpgGame, DocumentError> {
    let graph = InputGraph::new(body.players, body.edges)?;
    let altruism = AltruismNetwork::new(body.players, body.altruism.directed, body.altruism.edges)?;
    let tables = body.tables.into_iter().map(ExternalityTable::new).collect();
    let game = BnpgGame::new(graph, altruism, tables, body.costs, body.a)?;
    let violations = validate_game(&game);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(DocumentError::Invariant(list.join("; ")));
    }
    Ok(game)
}

fn read<B: DeserializeOwned>(text: &str) -> Result<(Metadata, B), DocumentError> {
    let env: Envelope<B> = serde_json::from_str(text)?;
    Ok((env.metadata, env.body))
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument, DocumentError> {
    // Syntax first, so that malformed JSON is never reported as a schema issue.
    serde_json::from_str::<serde::de::IgnoredAny>(text)?;
    let head: Head = serde_json::from_str(text)?;
    let (metadata, instance) = match head.kind {
        Kind::Game => {
            let (m, b) = read::<GameBody>(text)?;
            (m, Instance::Game(build_game(b)?))
        }
        Kind::Anm => {
            let (m, b) = read::<AnmBody>(text)?;
            let game = build_game(b.game)?;
            let anm = AnmInstance::new(
                game,
                StrategyProfile::new(b.target)?,
                b.add_costs.into_iter().map(|c| (c.edge, c.cost)),
                b.delete_costs.into_iter().map(|c| (c.edge, c.cost)),
                b.budget,
            )?;
            (m, Instance::Anm(anm))
        }
        Kind::Knapsack => {
            let (m, b) = read::<KnapsackBody>(text)?;
            let ks = KnapsackInstance {
                items: b.items,
                threshold: b.threshold,
                capacity: b.capacity,
            };
            ks.validate()?;
            (m, Instance::Knapsack(ks))
        }
        Kind::Sat => {
            let (m, b) = read::<SatBody>(text)?;
            let sat = SatInstance {
                variables: b.variables,
                clauses: b.clauses,
            };
            sat.validate_3b2()?;
            (m, Instance::Sat(sat))
        }
        Kind::Dpgg => {
            let (m, b) = read::<DpggBody>(text)?;
            (
                m,
                Instance::Dpgg(DirectedPgg::new(b.nodes, b.arcs, b.price)?),
            )
        }
        Kind::Profile => {
            let (m, b) = read::<ProfileBody>(text)?;
            (m, Instance::Profile(StrategyProfile::new(b.actions)?))
        }
        Kind::Mixed => {
            let (m, b) = read::<MixedBody>(text)?;
            (m, Instance::Mixed(MixedProfile::new(b.probabilities)?))
        }
        Kind::Edits => {
            let (m, b) = read::<EditsBody>(text)?;
            let mut additions = b.additions;
            let mut deletions = b.deletions;
            additions.sort_unstable();
            deletions.sort_unstable();
            let edits = EditSet {
                additions,
                deletions,
                total_cost: b.total_cost,
            };
            (m, Instance::Edits(edits))
        }
    };
    Ok(InstanceDocument { metadata, instance })
}

fn write<B: Serialize>(kind: Kind, metadata: &Metadata, body: B) -> String {
    let env = Envelope {
        kind,
        metadata: metadata.clone(),
        body,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("documents always serialize");
    text.push('\n');
    text
}

/// Canonical text: sorted edge lists, reduced rationals, fixed key order.
pub fn serialize_instance(doc: &InstanceDocument) -> String {
    let m = &doc.metadata;
    let kind = doc.kind();
    match &doc.instance {
        Instance::Game(g) => write(kind, m, game_body(g)),
        Instance::Anm(anm) => write(
            kind,
            m,
            AnmBody {
                game: game_body(anm.game()),
                target: anm.target().actions().to_vec(),
                add_costs: costs(anm.add_costs()),
                delete_costs: costs(anm.delete_costs()),
                budget: anm.budget(),
            },
        ),
        Instance::Knapsack(ks) => write(
            kind,
            m,
            KnapsackBody {
                items: ks.items.clone(),
                threshold: ks.threshold.clone(),
                capacity: ks.capacity,
            },
        ),
        Instance::Sat(sat) => write(
            kind,
            m,
            SatBody {
                variables: sat.variables,
                clauses: sat.clauses.clone(),
            },
        ),
        Instance::Dpgg(dg) => write(
            kind,
            m,
            DpggBody {
                nodes: dg.nodes,
                arcs: dg.arcs.clone(),
                price: dg.price.clone(),
            },
        ),
        Instance::Profile(p) => write(
            kind,
            m,
            ProfileBody {
                actions: p.actions().to_vec(),
            },
        ),
        Instance::Mixed(p) => write(
            kind,
            m,
            MixedBody {
                probabilities: p.probabilities().to_vec(),
            },
        ),
        Instance::Edits(e) => {
            let mut additions = e.additions.clone();
            let mut deletions = e.deletions.clone();
            additions.sort_unstable();
            deletions.sort_unstable();
            write(
                kind,
                m,
                EditsBody {
                    additions,
                    deletions,
                    total_cost: e.total_cost,
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_PLAYER: &str = r#"{
  "kind": "game",
  "metadata": {
    "description": "single player"
  },
  "body": {
    "players": 1,
    "edges": [],
    "altruism": {
      "directed": true,
      "edges": []
    },
    "a": 0,
    "costs": [
      "1/2"
    ],
    "tables": [
      [
        0,
        1
      ]
    ]
  }
}
"#;

    #[test]
    fn minimal_game_round_trips() {
        let doc = parse_instance(ONE_PLAYER).unwrap();
        assert_eq!(doc.kind(), Kind::Game);
        assert_eq!(serialize_instance(&doc), ONE_PLAYER);
    }

    #[test]
    fn canonical_form() {
        let text = r#"{"kind":"game","body":{"players":3,"edges":[[2,1],[1,0]],
            "altruism":{"directed":false,"edges":[[1,0]]},"a":"2/4",
            "costs":[1,"4/2",0],"tables":[[0,1,2],[0,1,2,3],[0,1,2]]}}"#;
        let out = serialize_instance(&parse_instance(text).unwrap());
        assert!(out.contains(
            "[\n        0,\n        1\n      ],\n      [\n        1,\n        2\n      ]"
        ));
        assert!(out.contains("\"a\": \"1/2\""));
        assert!(out.contains("\"costs\": [\n      1,\n      2,\n      0\n    ]"));
        assert_eq!(serialize_instance(&parse_instance(&out).unwrap()), out);
    }

    #[test]
    fn error_classes() {
        let bad_altruism = r#"{"kind":"game","body":{"players":3,"edges":[[0,1],[1,2]],
            "altruism":{"directed":true,"edges":[[0,2]]},"a":1,
            "costs":[1,1,1],"tables":[[0,1,2],[0,1,2,3],[0,1,2]]}}"#;
        match parse_instance(bad_altruism) {
            Err(DocumentError::Invariant(msg)) => assert!(msg.contains("(0,2)"), "{msg}"),
            other => panic!("expected invariant violation, got {other:?}"),
        }
        let zero_den = ONE_PLAYER.replace("\"1/2\"", "\"3/0\"");
        assert!(matches!(
            parse_instance(&zero_den),
            Err(DocumentError::Schema { line: 15, .. })
        ));
        assert!(matches!(
            parse_instance("{\"kind\": \"game\","),
            Err(DocumentError::Syntax { .. })
        ));
        assert!(matches!(
            parse_instance("{\"kind\": \"graph\", \"body\": {}}"),
            Err(DocumentError::Schema { .. })
        ));
    }

    #[test]
    fn budget_encoding() {
        let game = BnpgGame::new(
            InputGraph::new(2, [(0, 1)]).unwrap(),
            AltruismNetwork::empty(2, true),
            vec![ExternalityTable::from_ints(&[0, 1, 2]); 2],
            vec![Rational::one(); 2],
            Rational::one(),
        )
        .unwrap();
        for budget in [Budget::Infinite, Budget::Finite(7)] {
            let anm = AnmInstance::new(
                game.clone(),
                StrategyProfile::ones(2),
                [((1, 0), 3)],
                [],
                budget,
            )
            .unwrap();
            let doc = InstanceDocument::new(Instance::Anm(anm));
            let text = serialize_instance(&doc);
            assert!(text.contains(&format!(
                "\"budget\": {}",
                match budget {
                    Budget::Infinite => "\"inf\"".to_string(),
                    Budget::Finite(b) => b.to_string(),
                }
            )));
            assert_eq!(parse_instance(&text).unwrap(), doc);
        }
    }
}
