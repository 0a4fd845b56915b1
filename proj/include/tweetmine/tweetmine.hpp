#pragma once

#include "tweetmine/analytics.hpp"
#include "tweetmine/cluster.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/decompose.hpp"
#include "tweetmine/embed.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/features.hpp"
#include "tweetmine/matrix.hpp"
#include "tweetmine/pipeline.hpp"
#include "tweetmine/rng.hpp"
#include "tweetmine/sentiment.hpp"
#include "tweetmine/textprep.hpp"
#include "tweetmine/unicode_latin.hpp"
