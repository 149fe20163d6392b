#pragma once

#include "elastic_tb/errors.hpp"
#include "elastic_tb/numerics.hpp"
#include "elastic_tb/random.hpp"
#include "elastic_tb/parallel.hpp"
#include "elastic_tb/srsf.hpp"
#include "elastic_tb/align.hpp"
#include "elastic_tb/phase.hpp"
#include "elastic_tb/groupwise.hpp"
#include "elastic_tb/joint_fpca.hpp"
#include "elastic_tb/quantiles.hpp"
#include "elastic_tb/bootstrap.hpp"
#include "elastic_tb/tolerance_region.hpp"
#include "elastic_tb/simulate.hpp"
#include "elastic_tb/csv.hpp"
#include "elastic_tb/json_io.hpp"
#include "elastic_tb/svg.hpp"
#include "elastic_tb/file_io.hpp"
#include "elastic_tb/experiment.hpp"
