#ifndef MAHLER_MAHLER_HPP
#define MAHLER_MAHLER_HPP

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"
#include "mahler/real.hpp"
#include "mahler/ball.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational_function.hpp"
#include "mahler/power_series.hpp"
#include "mahler/linalg.hpp"
#include "mahler/mahler_system.hpp"
#include "mahler/orbit.hpp"
#include "mahler/evaluator.hpp"
#include "mahler/independence.hpp"
#include "mahler/bounds.hpp"
#include "mahler/lll.hpp"
#include "mahler/relation_probe.hpp"

#endif  // MAHLER_MAHLER_HPP
