#pragma once

// JSON wire formats.  All encoders emit deterministic, minimal JSON; all
// decoders validate shape and throw DomainError("UnknownFormat", ...) on
// malformed input.

#include <string>

#include <json.hpp>

#include "stagedlt/errors.hpp"
#include "stagedlt/galois.hpp"
#include "stagedlt/series.hpp"
#include "stagedlt/staged.hpp"

namespace lt {

using Json = nlohmann::ordered_json;

// {"p":2,"a":3,"n":2,"f":[1,1,1]}   (f constant term first)
Json ring_to_json(const GaloisRingSpec& s);
GaloisRing ring_from_json(const Json& j);

// element: coordinate array, constant term first: [1,2] = 2t+1
Json element_to_json(const GrElement& x);
GrElement element_from_json(const GaloisRing& R, const Json& j);

// {"coeff":{...},"h":2,"heights":[1],"D":8,"M":8,"Nx":8,"N":[4]}
Json staged_spec_to_json(const StagedRingSpec& s);
StagedRing staged_ring_from_json(const Json& j);

// {"stage":1,"denoms":{"u1":2},"terms":[{"e":[0,1],"c":[3]}]}
// terms sorted lexicographically by exponent vector; only nonzero denominators
Json staged_to_json(const StagedElement& x);
StagedElement staged_from_json(const StagedRing& R, const Json& j);

// {"stage":0,"terms":[{"i":1,"c":{...}}]}   nonzero terms, ascending degree
Json series1_to_json(const TruncSeries1& f);
TruncSeries1 series1_from_json(const StagedRing& R, const Json& j);

// {"stage":0,"terms":[{"i":1,"j":0,"c":{...}}]}   graded order, x-major
Json series2_to_json(const TruncSeries2& F);
TruncSeries2 series2_from_json(const StagedRing& R, const Json& j);

} // namespace lt
