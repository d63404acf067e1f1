#ifndef MLNS_MLNS_HPP
#define MLNS_MLNS_HPP

#include "mlns/density.hpp"
#include "mlns/derivative.hpp"
#include "mlns/error.hpp"
#include "mlns/eval.hpp"
#include "mlns/formula.hpp"
#include "mlns/label.hpp"
#include "mlns/num.hpp"
#include "mlns/poly.hpp"
#include "mlns/ramsey.hpp"
#include "mlns/rational.hpp"
#include "mlns/replay.hpp"
#include "mlns/ultrafilter.hpp"
#include "mlns/ultrapower.hpp"

#endif
