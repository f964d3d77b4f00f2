#pragma once

// Umbrella header. The HTTP geocoder lives in rescue/http_geocoder.hpp and
// is not included here, so plain users do not pull in cpp-httplib.

#include "rescue/address.hpp"
#include "rescue/bounded_queue.hpp"
#include "rescue/error.hpp"
#include "rescue/eval.hpp"
#include "rescue/features.hpp"
#include "rescue/full_address.hpp"
#include "rescue/geocode.hpp"
#include "rescue/lexicon.hpp"
#include "rescue/output.hpp"
#include "rescue/pipeline.hpp"
#include "rescue/text.hpp"
#include "rescue/timezone.hpp"
#include "rescue/tweet.hpp"
