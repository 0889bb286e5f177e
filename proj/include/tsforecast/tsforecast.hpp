#pragma once

#include "tsforecast/error.hpp"
#include "tsforecast/series.hpp"
#include "tsforecast/transforms.hpp"
#include "tsforecast/random.hpp"

#include "tsforecast/diagnostics/correlation.hpp"
#include "tsforecast/diagnostics/ljung_box.hpp"
#include "tsforecast/diagnostics/report.hpp"
#include "tsforecast/diagnostics/unit_root.hpp"

#include "tsforecast/arima/estimate.hpp"
#include "tsforecast/arima/forecast.hpp"
#include "tsforecast/arima/polynomial.hpp"
#include "tsforecast/arima/search.hpp"
#include "tsforecast/arima/state_space.hpp"
#include "tsforecast/arima/types.hpp"

#include "tsforecast/neural/model.hpp"
#include "tsforecast/neural/recurrent.hpp"
#include "tsforecast/neural/train.hpp"

#include "tsforecast/evaluation.hpp"
