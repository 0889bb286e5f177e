#pragma once

#include "tsforecast/io/config.hpp"
#include "tsforecast/io/csv.hpp"
#include "tsforecast/io/json.hpp"
#include "tsforecast/io/model_io.hpp"
#include "tsforecast/io/svg.hpp"
