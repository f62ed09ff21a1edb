//! Board, units, orders and adjudication.

pub mod adjudicate;
pub mod map;
pub mod oracle;
pub mod order;
pub mod power;
pub mod rules;
pub mod state;

pub use adjudicate::{adjudicate, AdjudicationError, OrderResult, Outcome, ResolutionReport};
pub use map::{Coast, Loc, Map, MapError, Prov, Province, Terrain, UnitKind};
pub use order::{parse_order, Command, Order, OrderError, OrderKind, OrderUnit};
pub use power::Power;
pub use rules::{legal_builds, legal_moves, validate_for, validate_order, Diagnostic, Rule};
pub use state::{
    supply_center_count, Dislodged, GameState, Phase, Season, StateSnapshot, Turn, Unit,
};
