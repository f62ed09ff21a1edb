//! Grounding Diplomacy negotiation messages into move intents, and detecting
//! broken commitments and persuasion against submitted orders.

pub mod analytics;
pub mod detect;
pub mod game;
pub mod graph;
pub mod io;
pub mod message;
pub mod sim;
pub mod smatch;

pub use game::*;
