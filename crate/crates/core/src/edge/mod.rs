pub mod airy;
pub mod painleve;
pub mod schrodinger;
pub mod scaling;
pub mod asymptotics;
pub mod densities;
