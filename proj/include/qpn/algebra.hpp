#pragma once

#include "qpn/core.hpp"

namespace qpn {

// Chain combination of signs (serial paths). Commutative and associative;
// Zero absorbs everything, Unknown absorbs everything except Zero.
Sign multiply(Sign a, Sign b);

// Parallel combination of signs (converging paths). Commutative and
// associative; Zero is the identity and Unknown absorbs.
Sign add(Sign a, Sign b);

// Serial combination of i1: a->b and i2: b->c into an influence a->c.
// Consistent condition pairs conjoin; pairs whose combined sign is Unknown
// are dropped (uncovered regions already read as Unknown). Entries whose
// conjoined condition would mention a or c are likewise dropped as
// inexpressible on the new link.
QualitativeInfluence chain(const QualitativeInfluence& i1, const QualitativeInfluence& i2);

// Combination of two influences with identical endpoints. The two entry
// partitions are refined into a common partition over the union of their
// condition vocabularies; each cell combines via add() with uncovered sides
// contributing Unknown. The result is re-expressed over the variables the
// combined sign actually depends on.
QualitativeInfluence parallel(const QualitativeInfluence& i1, const QualitativeInfluence& i2);

}  // namespace qpn
