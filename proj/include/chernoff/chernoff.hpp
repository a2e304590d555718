#pragma once

#include "chernoff/clt.hpp"
#include "chernoff/engine.hpp"
#include "chernoff/io.hpp"
#include "chernoff/linalg.hpp"
#include "chernoff/partitions.hpp"
#include "chernoff/quantum.hpp"
