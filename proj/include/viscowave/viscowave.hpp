#pragma once

#include "viscowave/analysis.hpp"
#include "viscowave/checks.hpp"
#include "viscowave/config.hpp"
#include "viscowave/diagnostics.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/kernel.hpp"
#include "viscowave/output.hpp"
#include "viscowave/pipeline.hpp"
#include "viscowave/simulate.hpp"
#include "viscowave/spectral.hpp"
#include "viscowave/sweep.hpp"
