#pragma once

// Umbrella header for the core library (no HTTP or CLI dependencies).

#include "paci/aggregator.hpp"
#include "paci/counterfactual.hpp"
#include "paci/csv_io.hpp"
#include "paci/date.hpp"
#include "paci/dcm.hpp"
#include "paci/epicriteria.hpp"
#include "paci/error.hpp"
#include "paci/json_io.hpp"
#include "paci/sensitivity.hpp"
#include "paci/svg.hpp"
#include "paci/valuemodel.hpp"
