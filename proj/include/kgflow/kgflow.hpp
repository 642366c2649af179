#pragma once

#include <kgflow/conformal.hpp>
#include <kgflow/errors.hpp>
#include <kgflow/flow.hpp>
#include <kgflow/io.hpp>
#include <kgflow/lattice.hpp>
#include <kgflow/lie_series.hpp>
#include <kgflow/naive_oracle.hpp>
#include <kgflow/parser.hpp>
#include <kgflow/pi_rational.hpp>
#include <kgflow/trig_poly.hpp>
#include <kgflow/version.hpp>
