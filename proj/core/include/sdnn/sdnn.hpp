#pragma once

#include "sdnn/challenge.hpp"
#include "sdnn/engine.hpp"
#include "sdnn/errors.hpp"
#include "sdnn/formats.hpp"
#include "sdnn/idx.hpp"
#include "sdnn/model_dir.hpp"
#include "sdnn/network.hpp"
#include "sdnn/radixnet.hpp"
#include "sdnn/sparse_matrix.hpp"
