#pragma once

// Umbrella header for the library (everything except the CLI frontend).

#include "analysis.hpp"
#include "closed_forms.hpp"
#include "design.hpp"
#include "errors.hpp"
#include "model_grammar.hpp"
#include "simulate.hpp"
#include "spectral.hpp"
#include "topology.hpp"
