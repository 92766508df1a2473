#pragma once

#include "stbcsim/channel.hpp"
#include "stbcsim/constellation.hpp"
#include "stbcsim/decoder.hpp"
#include "stbcsim/linalg.hpp"
#include "stbcsim/montecarlo.hpp"
#include "stbcsim/report.hpp"
#include "stbcsim/rng.hpp"
#include "stbcsim/selftest.hpp"
#include "stbcsim/stbc.hpp"
#include "stbcsim/version.hpp"
