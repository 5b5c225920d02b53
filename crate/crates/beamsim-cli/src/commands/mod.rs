pub mod fig1;
pub mod invariance;
pub mod simulate;
pub mod track;
