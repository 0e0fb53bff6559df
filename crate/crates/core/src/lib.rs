//! Computations around positive definite functions and their operator-algebra
//! structure, in two settings: finite groups via explicit unitary irreducible
//! representations (block matrix model), and finitely generated free groups via
//! reduced-word combinatorics (Haagerup functions, free Riesz products).
//! A small integer-lattice toolkit handles coset combinatorics in Z^d.

pub mod blocks;
pub mod coset;
pub mod group;
pub mod linalg;
pub mod pdf;
pub mod verify;
pub mod words;
