#pragma once

#include "numeric.hpp"
#include "parallel.hpp"
#include "core_sums.hpp"
#include "asymptotics.hpp"
#include "gseries.hpp"
#include "equidist.hpp"
#include "report.hpp"
#include "verify.hpp"
