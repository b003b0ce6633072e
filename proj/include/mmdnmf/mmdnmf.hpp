#pragma once

#include "mmdnmf/dataset.hpp"
#include "mmdnmf/errors.hpp"
#include "mmdnmf/eval.hpp"
#include "mmdnmf/experiment.hpp"
#include "mmdnmf/matrix.hpp"
#include "mmdnmf/multiplier_lp.hpp"
#include "mmdnmf/pairing.hpp"
#include "mmdnmf/report.hpp"
#include "mmdnmf/solver.hpp"
#include "mmdnmf/version.hpp"
