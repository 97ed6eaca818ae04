#pragma once

#include "coindex/bitvec.hpp"
#include "coindex/csv.hpp"
#include "coindex/cutoff.hpp"
#include "coindex/dataset.hpp"
#include "coindex/dimreduce.hpp"
#include "coindex/errors.hpp"
#include "coindex/histogram.hpp"
#include "coindex/metrics.hpp"
#include "coindex/model_io.hpp"
#include "coindex/pipeline.hpp"
#include "coindex/predicates.hpp"
#include "coindex/prologgen.hpp"
#include "coindex/rng.hpp"
#include "coindex/scaling.hpp"
#include "coindex/similarity.hpp"
#include "coindex/svg.hpp"
#include "coindex/sweep.hpp"
#include "coindex/synthetic.hpp"
