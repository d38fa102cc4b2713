//! Set-valued and fuzzy observations.
//!
//! An imprecise observation of a real quantity is an [`Interval`]; a fuzzy
//! one is a [`Trapezoid`], whose level cuts interpolate between its support
//! and its core. A fuzzy categorical observation is a [`DiscreteFuzzyLabel`],
//! a possibility-normalized assignment of membership degrees to labels.
//! [`FuzzyDatum`] unifies all of these (plus their precise special cases)
//! behind membership and level-cut queries, which is all the loss layer needs:
//! every loss over fuzzy data reduces to ordinary set-valued losses on the
//! level cuts `[Y]_alpha`, `alpha` in `(0, 1]`.
//!
//! Cuts are closed on both ends and nested: `alpha1 <= alpha2` implies
//! `[Y]_alpha2` is contained in `[Y]_alpha1`. The cut at `alpha = 1` is the
//! core. The support is approximated by the cut at a small positive level
//! ([`MIN_SUPPORT_ALPHA`]) rather than `alpha = 0`, whose cut would be the
//! whole domain.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use core::fmt;

/// Level used by `support`: the `alpha -> 0` limit of the cuts, kept strictly
/// positive so the cut stays a bounded set.
pub const MIN_SUPPORT_ALPHA: f64 = 1e-9;

/// Degrees this close to 1 count as 1 when checking possibility normalization.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Errors from constructing or querying fuzzy observations.
#[derive(Clone, Debug, PartialEq)]
pub enum FuzzyError {
    /// A bound or degree was NaN or infinite.
    NonFinite,
    /// Interval bounds out of order.
    BadInterval { lo: f64, hi: f64 },
    /// Trapezoid knots out of order.
    BadTrapezoid { a: f64, b: f64, c: f64, d: f64 },
    /// A fuzzy label carried no labels at all.
    EmptyLabelSet,
    /// A membership degree fell outside `[0, 1]`.
    DegreeOutOfRange { degree: f64 },
    /// No degree reaches 1, so the assignment is not possibility-normalized.
    NotNormalized { max_degree: f64 },
    /// A level outside the valid range `(0, 1]`.
    AlphaOutOfRange { alpha: f64 },
    /// A real-valued query against a label-valued observation or vice versa.
    KindMismatch,
}

impl fmt::Display for FuzzyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuzzyError::NonFinite => write!(f, "bound or degree is not finite"),
            FuzzyError::BadInterval { lo, hi } => {
                write!(f, "interval bounds out of order: lo = {lo}, hi = {hi}")
            }
            FuzzyError::BadTrapezoid { a, b, c, d } => {
                write!(f, "trapezoid knots must satisfy a <= b <= c <= d, got ({a}, {b}, {c}, {d})")
            }
            FuzzyError::EmptyLabelSet => write!(f, "fuzzy label needs at least one label"),
            FuzzyError::DegreeOutOfRange { degree } => {
                write!(f, "membership degree {degree} outside [0, 1]")
            }
            FuzzyError::NotNormalized { max_degree } => {
                write!(f, "no membership degree reaches 1 (max is {max_degree}); possibility distributions must be normalized")
            }
            FuzzyError::AlphaOutOfRange { alpha } => {
                write!(f, "level alpha = {alpha} outside (0, 1]")
            }
            FuzzyError::KindMismatch => {
                write!(f, "real-valued and label-valued observations cannot be mixed in this query")
            }
        }
    }
}

impl core::error::Error for FuzzyError {}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), FuzzyError> {
    if alpha.is_nan() || alpha <= 0.0 || alpha > 1.0 {
        Err(FuzzyError::AlphaOutOfRange { alpha })
    } else {
        Ok(())
    }
}

/// A closed real interval `[lo, hi]`. Degenerate intervals (`lo == hi`)
/// represent precise values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Closed interval from `lo` to `hi`.
    ///
    /// # Examples
    ///
    /// ```
    /// use fuzzyfit_core::fuzzy::Interval;
    ///
    /// let iv = Interval::new(1.0, 3.0).unwrap();
    /// assert_eq!(iv.mid(), 2.0);
    /// assert_eq!(iv.clamp(7.0), 3.0);
    /// assert!(Interval::new(3.0, 1.0).is_err());
    /// ```
    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(FuzzyError::NonFinite);
        }
        if lo > hi {
            return Err(FuzzyError::BadInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The precise value `v` as the degenerate interval `[v, v]`.
    pub fn degenerate(v: f64) -> Result<Self, FuzzyError> {
        Interval::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Half-width; zero for precise values.
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Nearest point of the interval to `x`.
    pub fn clamp(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo
        } else if x > self.hi {
            self.hi
        } else {
            x
        }
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// A trapezoidal fuzzy number with support `[a, d]` and core `[b, c]`.
///
/// Membership rises linearly from `a` to `b`, is 1 on `[b, c]`, and falls
/// linearly from `c` to `d`. Triangular numbers (`b == c`), intervals
/// (`a == b`, `c == d`) and precise values (all equal) are special cases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trapezoid {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Trapezoid {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(FuzzyError::NonFinite);
        }
        if !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::BadTrapezoid { a, b, c, d });
        }
        Ok(Trapezoid { a, b, c, d })
    }

    /// Triangular fuzzy number with support `[lo, hi]` and mode `m`.
    pub fn triangular(lo: f64, m: f64, hi: f64) -> Result<Self, FuzzyError> {
        Trapezoid::new(lo, m, m, hi)
    }

    /// The crisp interval `[lo, hi]` seen as a trapezoid with vertical sides.
    pub fn from_interval(iv: Interval) -> Self {
        Trapezoid { a: iv.lo, b: iv.lo, c: iv.hi, d: iv.hi }
    }

    /// The precise value `v`.
    pub fn precise(v: f64) -> Result<Self, FuzzyError> {
        Trapezoid::new(v, v, v, v)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// The core, the cut at `alpha = 1`.
    pub fn core(&self) -> Interval {
        Interval { lo: self.b, hi: self.c }
    }

    /// Membership degree of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x < self.b {
            // a < b here since a <= x < b.
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else if self.d > self.c {
            (self.d - x) / (self.d - self.c)
        } else {
            // c == d == x: the right edge is vertical.
            1.0
        }
    }

    /// Level cut `[a + alpha (b - a), d - alpha (d - c)]` for `alpha` in `(0, 1]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval, FuzzyError> {
        check_alpha(alpha)?;
        Ok(self.cut(alpha))
    }

    /// Cut without the range check; callers guarantee `alpha` in `(0, 1]`.
    pub(crate) fn cut(&self, alpha: f64) -> Interval {
        let lo = self.a + alpha * (self.b - self.a);
        let hi = self.d - alpha * (self.d - self.c);
        // Rounding cannot cross the core, but keep the invariant airtight.
        Interval { lo: lo.min(self.b), hi: hi.max(self.c) }
    }

    /// The cut at [`MIN_SUPPORT_ALPHA`], the working stand-in for the support.
    pub fn support(&self) -> Interval {
        self.cut(MIN_SUPPORT_ALPHA)
    }
}

/// A categorical label. Ordering is lexicographic, which fixes deterministic
/// iteration and tie-breaking everywhere label sets appear.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Label(name.into())
    }

    /// The positive class of a binary problem.
    pub fn positive() -> Self {
        Label::new("+1")
    }

    /// The negative class of a binary problem.
    pub fn negative() -> Self {
        Label::new("-1")
    }

    /// `+1.0` / `-1.0` for the binary classes, `None` otherwise.
    pub fn to_sign(&self) -> Option<f64> {
        match self.0.as_str() {
            "+1" => Some(1.0),
            "-1" => Some(-1.0),
            _ => None,
        }
    }

    /// Label for the sign of `s`; zero maps to the positive class.
    pub fn from_sign(s: f64) -> Self {
        if s >= 0.0 {
            Label::positive()
        } else {
            Label::negative()
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A crisp set of labels, the level cut of a fuzzy label.
pub type LabelSet = BTreeSet<Label>;

/// A possibility-normalized fuzzy subset of a finite label alphabet: each
/// label carries a degree in `[0, 1]` and at least one degree equals 1.
///
/// Degree 1 on a single label with all others at 0 is a crisp observation;
/// degree 1 on several labels expresses pure ambiguity between them; a degree
/// strictly between 0 and 1 discounts a label without excluding it.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteFuzzyLabel {
    memberships: BTreeMap<Label, f64>,
}

impl DiscreteFuzzyLabel {
    /// Validates degrees and normalization.
    ///
    /// Labels with degree exactly 0 are kept; they are simply outside every
    /// cut and the support.
    pub fn new(memberships: BTreeMap<Label, f64>) -> Result<Self, FuzzyError> {
        if memberships.is_empty() {
            return Err(FuzzyError::EmptyLabelSet);
        }
        let mut max_degree = 0.0_f64;
        for &degree in memberships.values() {
            if !degree.is_finite() {
                return Err(FuzzyError::NonFinite);
            }
            if !(0.0..=1.0).contains(&degree) {
                return Err(FuzzyError::DegreeOutOfRange { degree });
            }
            max_degree = max_degree.max(degree);
        }
        if max_degree < 1.0 - NORMALIZATION_TOL {
            return Err(FuzzyError::NotNormalized { max_degree });
        }
        Ok(DiscreteFuzzyLabel { memberships })
    }

    /// The crisp observation of a single label.
    pub fn crisp(label: Label) -> Self {
        let mut m = BTreeMap::new();
        m.insert(label, 1.0);
        DiscreteFuzzyLabel { memberships: m }
    }

    /// Binary observation `label` with the opposite class discounted to
    /// degree `gamma`; `gamma = 0` is crisp, `gamma = 1` is complete
    /// ambiguity.
    pub fn binary_discounted(label: Label, gamma: f64) -> Result<Self, FuzzyError> {
        let other = if label == Label::positive() {
            Label::negative()
        } else {
            Label::positive()
        };
        let mut m = BTreeMap::new();
        m.insert(label, 1.0);
        m.insert(other, gamma);
        DiscreteFuzzyLabel::new(m)
    }

    pub fn memberships(&self) -> &BTreeMap<Label, f64> {
        &self.memberships
    }

    /// Degree of `label`; labels outside the alphabet have degree 0.
    pub fn membership(&self, label: &Label) -> f64 {
        self.memberships.get(label).copied().unwrap_or(0.0)
    }

    /// Labels with degree at least `alpha`; never empty by normalization.
    pub fn alpha_cut(&self, alpha: f64) -> Result<LabelSet, FuzzyError> {
        check_alpha(alpha)?;
        Ok(self.cut(alpha))
    }

    pub(crate) fn cut(&self, alpha: f64) -> LabelSet {
        // Degrees within the normalization slack of the level still make the
        // cut, so the core is never empty.
        self.memberships
            .iter()
            .filter(|(_, &degree)| degree >= alpha - NORMALIZATION_TOL)
            .map(|(label, _)| label.clone())
            .collect()
    }

    /// Labels with strictly positive degree.
    pub fn support(&self) -> LabelSet {
        self.cut(MIN_SUPPORT_ALPHA)
    }

    /// For binary alphabets: the fully plausible class as a sign, and the
    /// confidence `w = 1 - degree(other class)`.
    ///
    /// When both classes are fully plausible the observation carries no class
    /// information; the positive sign is returned with `w = 0`. `None` if any
    /// label with positive degree lies outside `{+1, -1}`.
    pub fn as_binary_discounted(&self) -> Option<(f64, f64)> {
        let pos = Label::positive();
        let neg = Label::negative();
        for (label, &degree) in &self.memberships {
            if degree > 0.0 && *label != pos && *label != neg {
                return None;
            }
        }
        let dp = self.membership(&pos);
        let dn = self.membership(&neg);
        if dp >= 1.0 - NORMALIZATION_TOL {
            Some((1.0, 1.0 - dn))
        } else {
            // Normalization guarantees dn reaches 1 here.
            Some((-1.0, 1.0 - dp))
        }
    }
}

/// A crisp value: the result of disambiguating an observation.
#[derive(Clone, Debug, PartialEq)]
pub enum CrispValue {
    Real(f64),
    Label(Label),
}

impl fmt::Display for CrispValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrispValue::Real(v) => write!(f, "{v}"),
            CrispValue::Label(l) => write!(f, "{l}"),
        }
    }
}

/// A crisp set of output values: a level cut of a [`FuzzyDatum`].
#[derive(Clone, Debug, PartialEq)]
pub enum OutputSet {
    Interval(Interval),
    Labels(LabelSet),
}

/// The kind of a datum, for dispatch and compatibility checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatumKind {
    Real,
    Interval,
    Trapezoid,
    Label,
    FuzzyLabel,
}

/// One observed output value, at any precision: a precise real, an interval,
/// a trapezoidal fuzzy number, a crisp label, or a fuzzy label.
///
/// # Examples
///
/// ```
/// use fuzzyfit_core::fuzzy::{CrispValue, FuzzyDatum, OutputSet};
///
/// let y = FuzzyDatum::trapezoid(0.0, 1.0, 2.0, 4.0).unwrap();
/// match y.alpha_cut(0.5).unwrap() {
///     OutputSet::Interval(iv) => {
///         assert_eq!(iv.lo(), 0.5);
///         assert_eq!(iv.hi(), 3.0);
///     }
///     _ => unreachable!(),
/// }
/// assert_eq!(y.membership(&CrispValue::Real(3.0)).unwrap(), 0.5);
/// ```
#[derive(Clone, Debug, PartialEq)]
pub enum FuzzyDatum {
    Real(f64),
    Interval(Interval),
    Trapezoid(Trapezoid),
    Label(Label),
    FuzzyLabel(DiscreteFuzzyLabel),
}

impl FuzzyDatum {
    pub fn real(v: f64) -> Result<Self, FuzzyError> {
        if !v.is_finite() {
            return Err(FuzzyError::NonFinite);
        }
        Ok(FuzzyDatum::Real(v))
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        Ok(FuzzyDatum::Interval(Interval::new(lo, hi)?))
    }

    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        Ok(FuzzyDatum::Trapezoid(Trapezoid::new(a, b, c, d)?))
    }

    pub fn label(name: impl Into<String>) -> Self {
        FuzzyDatum::Label(Label::new(name))
    }

    pub fn fuzzy_label(memberships: BTreeMap<Label, f64>) -> Result<Self, FuzzyError> {
        Ok(FuzzyDatum::FuzzyLabel(DiscreteFuzzyLabel::new(memberships)?))
    }

    pub fn kind(&self) -> DatumKind {
        match self {
            FuzzyDatum::Real(_) => DatumKind::Real,
            FuzzyDatum::Interval(_) => DatumKind::Interval,
            FuzzyDatum::Trapezoid(_) => DatumKind::Trapezoid,
            FuzzyDatum::Label(_) => DatumKind::Label,
            FuzzyDatum::FuzzyLabel(_) => DatumKind::FuzzyLabel,
        }
    }

    /// Real-valued data (precise, interval, or trapezoid), as opposed to
    /// label-valued.
    pub fn is_real_kind(&self) -> bool {
        matches!(
            self,
            FuzzyDatum::Real(_) | FuzzyDatum::Interval(_) | FuzzyDatum::Trapezoid(_)
        )
    }

    pub fn is_label_kind(&self) -> bool {
        !self.is_real_kind()
    }

    /// Precise observations carry exactly one value.
    pub fn is_precise(&self) -> bool {
        match self {
            FuzzyDatum::Real(_) | FuzzyDatum::Label(_) => true,
            FuzzyDatum::Interval(iv) => iv.is_degenerate(),
            _ => false,
        }
    }

    /// Genuinely fuzzy observations, whose cuts depend on the level.
    pub fn is_fuzzy(&self) -> bool {
        matches!(self, FuzzyDatum::Trapezoid(_) | FuzzyDatum::FuzzyLabel(_))
    }

    /// The single value of a precise observation.
    pub fn as_crisp(&self) -> Option<CrispValue> {
        match self {
            FuzzyDatum::Real(v) => Some(CrispValue::Real(*v)),
            FuzzyDatum::Label(l) => Some(CrispValue::Label(l.clone())),
            FuzzyDatum::Interval(iv) if iv.is_degenerate() => Some(CrispValue::Real(iv.lo())),
            _ => None,
        }
    }

    /// Membership degree of a crisp value. Real values can only be queried
    /// against real-kind data and labels against label-kind data.
    pub fn membership(&self, value: &CrispValue) -> Result<f64, FuzzyError> {
        match (self, value) {
            (FuzzyDatum::Real(y), CrispValue::Real(v)) => Ok(if v == y { 1.0 } else { 0.0 }),
            (FuzzyDatum::Interval(iv), CrispValue::Real(v)) => {
                Ok(if iv.contains(*v) { 1.0 } else { 0.0 })
            }
            (FuzzyDatum::Trapezoid(t), CrispValue::Real(v)) => Ok(t.membership(*v)),
            (FuzzyDatum::Label(l), CrispValue::Label(q)) => Ok(if l == q { 1.0 } else { 0.0 }),
            (FuzzyDatum::FuzzyLabel(fl), CrispValue::Label(q)) => Ok(fl.membership(q)),
            _ => Err(FuzzyError::KindMismatch),
        }
    }

    /// Level cut as a crisp output set; defined for `alpha` in `(0, 1]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<OutputSet, FuzzyError> {
        check_alpha(alpha)?;
        Ok(self.cut(alpha))
    }

    pub(crate) fn cut(&self, alpha: f64) -> OutputSet {
        match self {
            FuzzyDatum::Real(y) => OutputSet::Interval(Interval { lo: *y, hi: *y }),
            FuzzyDatum::Interval(iv) => OutputSet::Interval(*iv),
            FuzzyDatum::Trapezoid(t) => OutputSet::Interval(t.cut(alpha)),
            FuzzyDatum::Label(l) => {
                let mut s = LabelSet::new();
                s.insert(l.clone());
                OutputSet::Labels(s)
            }
            FuzzyDatum::FuzzyLabel(fl) => OutputSet::Labels(fl.cut(alpha)),
        }
    }

    /// The cut at [`MIN_SUPPORT_ALPHA`].
    pub fn support(&self) -> OutputSet {
        self.cut(MIN_SUPPORT_ALPHA)
    }

    /// Binary class sign and confidence for label-kind data; see
    /// [`DiscreteFuzzyLabel::as_binary_discounted`]. Crisp labels have full
    /// confidence.
    pub fn as_binary_discounted(&self) -> Option<(f64, f64)> {
        match self {
            FuzzyDatum::Label(l) => l.to_sign().map(|y| (y, 1.0)),
            FuzzyDatum::FuzzyLabel(fl) => fl.as_binary_discounted(),
            _ => None,
        }
    }
}
