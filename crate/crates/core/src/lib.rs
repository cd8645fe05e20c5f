//! Torus fixed points, tangent characters and generating series for
//! affine type Â bow varieties.
//!
//! A bow variety is described by a standard brane triple `(d, e, f)`.
//! Its torus fixed points are coded by Maya diagrams, which decompose into
//! a core (an integer contingency table with margins `e`, `f`) and an
//! `n·m`-tuple of partitions. On top of the enumeration the crate computes
//! equivariant K-theory tangent characters (two independent formulas),
//! Euler characteristic and cell-count generating series, the parabolic
//! partition function over an exact field, and the σ-series identities of
//! the `(3,2,1)` family.
//!
//! Numeric code is generic over the coefficient type. The aliases at the
//! crate root fix the concrete choices used by the CLI.

pub mod brane;
pub mod error;
pub mod eyd;
pub mod kclass;
pub mod maya;
pub mod modular;
pub mod nekrasov;
pub mod partition;
pub mod scalar;
pub mod series;
pub mod tangent;

pub use brane::{BraneTriple, QuiverData, TripleDiagnostics};
pub use error::{BowError, Result};
pub use eyd::{ExtendedYoungDiagram, LatticeRegion};
pub use kclass::{GammaOrientation, KClass, LinearForm, Monomial, WeightSign};
pub use maya::{Core, MayaDiagram, QuotientTuple};
pub use nekrasov::ParamPoint;
pub use partition::Partition;
pub use scalar::{Coeff, Scalar};
pub use series::{CellSign, QSeries, QTSeries};
pub use tangent::{CellDims, Pair01};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Integer q-series, the default for Euler characteristic series.
pub type IntSeries = QSeries<i64>;

/// Integer (q,t)-series, the default for cell-count series.
pub type IntQTSeries = QTSeries<i64>;

/// Parameter point over exact rationals.
pub type RationalPoint = ParamPoint<Rational>;

/// Parameter point over `f64`, for quick numerical exploration.
pub type FloatPoint = ParamPoint<f64>;
