#pragma once

#include "mobnet/config.hpp"
#include "mobnet/csv.hpp"
#include "mobnet/dot.hpp"
#include "mobnet/errors.hpp"
#include "mobnet/format.hpp"
#include "mobnet/geojson.hpp"
#include "mobnet/inclusiveness.hpp"
#include "mobnet/ingest.hpp"
#include "mobnet/metrics.hpp"
#include "mobnet/network.hpp"
#include "mobnet/pipeline.hpp"
#include "mobnet/ratio.hpp"
#include "mobnet/records.hpp"
#include "mobnet/report.hpp"
#include "mobnet/schema.hpp"
#include "mobnet/shares.hpp"
