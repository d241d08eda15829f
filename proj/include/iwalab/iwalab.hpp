#pragma once

#include "iwalab/errors.hpp"
#include "iwalab/padic.hpp"
#include "iwalab/linalg.hpp"
#include "iwalab/lambda.hpp"
#include "iwalab/random.hpp"
#include "iwalab/module.hpp"
#include "iwalab/kernel.hpp"
#include "iwalab/tower.hpp"
#include "iwalab/pairing.hpp"
#include "iwalab/spec_file.hpp"
#include "iwalab/workbench.hpp"
