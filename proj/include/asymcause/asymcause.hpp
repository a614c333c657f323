#pragma once

#include "asymcause/bootstrap.hpp"
#include "asymcause/causality.hpp"
#include "asymcause/chi_square.hpp"
#include "asymcause/config.hpp"
#include "asymcause/data_io.hpp"
#include "asymcause/decompose.hpp"
#include "asymcause/diagnostics.hpp"
#include "asymcause/errors.hpp"
#include "asymcause/linalg.hpp"
#include "asymcause/monte_carlo.hpp"
#include "asymcause/parallel.hpp"
#include "asymcause/study.hpp"
#include "asymcause/time_series.hpp"
#include "asymcause/var.hpp"
