//! Strong global dimension of monomial bound quiver algebras, computed from
//! indecomposable bounded complexes of projectives.

pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod qalgebra;
pub mod complexcat;
pub mod homlin;
pub mod enumerate;
pub mod arquiver;
pub mod sgldim;

pub use error::{Error, Result};
pub use field::{Field, FiniteField, Fp};
pub use num_rational::BigRational;
pub use complexcat::{ChainMap, Complex};
pub use qalgebra::{AlgElement, FieldTag, FinModule, ModuleMap, MonomialAlgebra, PathMatrix, Quiver};

pub type Rational = BigRational;
pub type Gf2 = Fp<2>;
pub type Gf3 = Fp<3>;
pub type Gf5 = Fp<5>;
