#pragma once

#include "retint/conditional.hpp"
#include "retint/dfa.hpp"
#include "retint/dfa_factors.hpp"
#include "retint/error.hpp"
#include "retint/factors.hpp"
#include "retint/fitting.hpp"
#include "retint/ingest.hpp"
#include "retint/intervals.hpp"
#include "retint/parallel.hpp"
#include "retint/rng.hpp"
#include "retint/stats.hpp"
#include "retint/synth.hpp"
#include "retint/volatility.hpp"
