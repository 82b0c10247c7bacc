#ifndef PDFP_PDFP_HPP_
#define PDFP_PDFP_HPP_

#include "pdfp/cli.hpp"
#include "pdfp/config.hpp"
#include "pdfp/diagnostics.hpp"
#include "pdfp/io.hpp"
#include "pdfp/linear_map.hpp"
#include "pdfp/problem.hpp"
#include "pdfp/problems.hpp"
#include "pdfp/prox.hpp"
#include "pdfp/rng.hpp"
#include "pdfp/solver.hpp"
#include "pdfp/vec.hpp"

#endif  // PDFP_PDFP_HPP_
