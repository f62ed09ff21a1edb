// Loader and checker for the hand-resolved adjudication cases. Shared with the
// acceptance suite through a #[path] include.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use dipintent::game::oracle::{resolve_moves, OracleVerdict};
use dipintent::game::{
    adjudicate, parse_order, validate_order, Command, GameState, Map, Order, Outcome, Power, Prov,
};
use serde::Deserialize;

#[derive(Deserialize)]
struct File {
    case: Vec<RawCase>,
}

#[derive(Deserialize)]
struct RawCase {
    name: String,
    units: Vec<String>,
    orders: Vec<String>,
    outcomes: Vec<Outcome>,
    #[serde(default)]
    dislodged: Vec<String>,
}

pub struct Case {
    pub name: String,
    pub state: GameState,
    pub orders: Vec<Order>,
    pub outcomes: Vec<Outcome>,
    pub dislodged: BTreeSet<Prov>,
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load_cases() -> Vec<Case> {
    let text = std::fs::read_to_string(fixtures_dir().join("adjudication.toml")).unwrap();
    let file: File = toml::from_str(&text).unwrap();
    let map = Map::standard();
    file.case
        .into_iter()
        .map(|c| {
            let mut state = GameState::empty(map.clone(), dipintent::game::Turn::FIRST);
            for u in &c.units {
                state = state.with(u).unwrap();
            }
            let orders = c
                .orders
                .iter()
                .map(|o| parse_order(o, &map, None).unwrap())
                .collect();
            let dislodged = c.dislodged.iter().map(|p| map.prov(p).unwrap()).collect();
            assert_eq!(c.orders.len(), c.outcomes.len(), "{}", c.name);
            Case {
                name: c.name,
                state,
                orders,
                outcomes: c.outcomes,
                dislodged,
            }
        })
        .collect()
}

fn by_power(state: &GameState, orders: &[Order]) -> BTreeMap<Power, Vec<Order>> {
    let mut out: BTreeMap<Power, Vec<Order>> = BTreeMap::new();
    for o in orders {
        let owner = state
            .unit_at(o.prov())
            .expect("order for a unit on the board")
            .owner;
        out.entry(owner).or_default().push(*o);
    }
    out
}

/// Checks the adjudicator against the hand-written expectations and against
/// the brute-force oracle.
pub fn check_case(case: &Case) -> Result<(), String> {
    let orders = by_power(&case.state, &case.orders);
    let (_, report) = adjudicate(&case.state, &orders).map_err(|e| e.to_string())?;
    for (o, want) in case.orders.iter().zip(&case.outcomes) {
        let got = report.outcome_of(o);
        if got != Some(*want) {
            return Err(format!("{}: {o} expected {want:?}, got {got:?}", case.name));
        }
    }
    let got_dislodged: BTreeSet<Prov> = report.dislodged.iter().map(|d| d.unit.loc.prov).collect();
    if got_dislodged != case.dislodged {
        return Err(format!(
            "{}: dislodged {got_dislodged:?}, expected {:?}",
            case.name, case.dislodged
        ));
    }
    compare_with_oracle(&case.state, &case.orders).map_err(|e| format!("{}: {e}", case.name))
}

/// Runs both resolvers on the same orders and compares which moves succeed.
pub fn compare_with_oracle(state: &GameState, orders: &[Order]) -> Result<(), String> {
    let mut effective: BTreeMap<Prov, Order> = state
        .units()
        .map(|u| (u.loc.prov, Order::hold(u.order_unit())))
        .collect();
    for o in orders {
        if validate_order(state, o).is_ok() {
            effective.insert(o.prov(), *o);
        }
    }
    let want = match resolve_moves(state, &effective) {
        OracleVerdict::Resolved(s) => s,
        v => return Err(format!("oracle gave {v:?}")),
    };
    let (_, report) = adjudicate(state, &by_power(state, orders)).map_err(|e| e.to_string())?;
    let got: BTreeSet<Prov> = report
        .results
        .iter()
        .filter(|r| {
            matches!(r.order.command, Command::Move { .. }) && r.outcome == Outcome::Succeeds
        })
        .map(|r| r.order.prov())
        .collect();
    if got != want {
        return Err(format!("adjudicator moved {got:?}, oracle {want:?}"));
    }
    Ok(())
}
