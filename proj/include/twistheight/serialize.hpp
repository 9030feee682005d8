#pragma once

// JSON forms of the library types. Exact integers and rationals are decimal
// strings ("-3/4"), so values of any size survive; transcendental values are
// {"value", "error"} with as many digits as the precision supports.

#include "twistheight/bounds.hpp"
#include "twistheight/curve.hpp"
#include "twistheight/families.hpp"
#include "twistheight/localheights.hpp"

#include "json.hpp"

namespace twistheight {

using Json = nlohmann::ordered_json;

Json to_json(const ExactInt &n);
Json to_json(const ExactRational &r);
ExactInt int_from_json(const Json &j);

/// {"value", "error"}; error is an absolute bound 2^-(precision-16) max(1, |x|) unless given
Json numeric_json(const BigFloat &x, unsigned precision);
Json numeric_json(const BigFloat &x, unsigned precision, const BigFloat &error);

/// [a1, a2, a3, a4, a6]
Json to_json(const WeierstrassModel &e);
WeierstrassModel model_from_json(const Json &j);

/// [alpha, beta, delta] or "O"
Json to_json(const CurvePoint &p);
/// Checks that the point lies on e.
CurvePoint point_from_json(const Json &j, const WeierstrassModel &e);

/// coefficients, constant term first
Json to_json(const IntPolynomial &f);
IntPolynomial polynomial_from_json(const Json &j);

Json to_json(const Factorization &f);
Json to_json(const SquareFreeVerdict &v);
Json to_json(const PeriodData &pd);
Json to_json(const LocalEntry &e, unsigned precision);
Json to_json(const LocalHeightBreakdown &b);
Json to_json(const WeierstrassModel &e, const CurvePoint &p, const CanonicalHeight &h);
Json to_json(const LowerBoundReport &r);
Json to_json(const PrimitivityCertificate &c);
Json to_json(const PrimeBoundCheck &c);

/// f, F, f1, D, m (and A, B for closed-form families)
Json to_json(const TwistFamily &fam);
/// Rebuilds through construct_family and checks the stored f1, D and m agree.
TwistFamily family_from_json(const Json &j);

Json to_json(const FamilyInstance &in);
Json to_json(const ScanEntry &s);
Json to_json(const FamilyUpperBound &b, unsigned precision);
Json to_json(const ThresholdResult &r, unsigned precision);

} // namespace twistheight
