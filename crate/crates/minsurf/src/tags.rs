//! Tag strings naming the identity or construction behind each reported
//! number.

pub const SPHERE: &str = "unit-sphere";
pub const MINIMAL: &str = "minimality";
pub const CATALOG: &str = "catalog-closed-form";
pub const GAUSS: &str = "gauss-equation";
pub const NORMAL_CURVATURE: &str = "normal-curvature";
pub const ELLIPSE: &str = "curvature-ellipse";
pub const A_PM: &str = "a-plus-minus";
pub const HOPF: &str = "hopf-differential";
pub const LAPLACE: &str = "laplacian-log-a";
pub const FORMS: &str = "connection-form-formulas";
pub const FRAME_IDENTITIES: &str = "frame-derivative-identities";
pub const FLATNESS: &str = "maurer-cartan-flatness";
pub const RECONSTRUCTION: &str = "frame-integration";
pub const ISOMETRY: &str = "associated-family-isometry";
pub const CONGRUENCE: &str = "procrustes-congruence";
pub const GAUSS_BONNET: &str = "gauss-bonnet";
pub const NORMAL_EULER: &str = "normal-euler-number";
pub const EULER_ZERO: &str = "euler-zero-count-relation";
pub const RICCI: &str = "ricci-condition";
pub const MONODROMY: &str = "deck-monodromy";
pub const CLOSING: &str = "closing-set-dichotomy";
