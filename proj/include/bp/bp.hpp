#pragma once

#include <bp/rational.hpp>
#include <bp/words.hpp>
#include <bp/birkhoff.hpp>
#include <bp/nilgroup.hpp>
#include <bp/polynomial.hpp>
#include <bp/endo.hpp>
#include <bp/approx.hpp>
#include <bp/cobound.hpp>
#include <bp/limitfn.hpp>
#include <bp/prolong.hpp>
#include <bp/experiments.hpp>
#include <bp/io.hpp>
