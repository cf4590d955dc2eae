#pragma once

#include "cogact/attention.hpp"
#include "cogact/config.hpp"
#include "cogact/corpus.hpp"
#include "cogact/error.hpp"
#include "cogact/harness.hpp"
#include "cogact/ltm.hpp"
#include "cogact/metrics.hpp"
#include "cogact/pairs_io.hpp"
#include "cogact/pattern.hpp"
#include "cogact/snapshot.hpp"
#include "cogact/stm.hpp"
#include "cogact/version.hpp"
