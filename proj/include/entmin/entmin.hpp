#pragma once

// Convex entropy minimization over finite weighted ground spaces:
// dual ascent, primal recovery and machine-checkable optimality
// certificates, with the Sinkhorn/IPF specialization for marginal
// constraints.

#include "entmin/constraints.hpp"
#include "entmin/dual.hpp"
#include "entmin/errors.hpp"
#include "entmin/ground.hpp"
#include "entmin/lp.hpp"
#include "entmin/numerics.hpp"
#include "entmin/oracle.hpp"
#include "entmin/orlicz.hpp"
#include "entmin/qualification.hpp"
#include "entmin/recovery.hpp"
#include "entmin/sinkhorn.hpp"
#include "entmin/solver.hpp"
#include "entmin/young.hpp"
